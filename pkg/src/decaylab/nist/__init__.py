"""NIST SP 800-22 statistical tests on bit sequences."""

from .battery import TEST_ORDER, BatteryConfig, report_rows, run_battery
from .complexity import berlekamp_massey, linear_complexity_test
from .entropy import approximate_entropy_test, serial_test
from .excursions import random_excursions_test, random_excursions_variant_test
from .frequency import block_frequency_test, cumulative_sums_test
from .rank import binary_matrix_rank_test
from .runs import longest_run_test, runs_test
from .spectral import dft_test
from .templates import non_overlapping_template_test, overlapping_template_test
from .universal import universal_test

__all__ = [
    "TEST_ORDER",
    "BatteryConfig",
    "run_battery",
    "report_rows",
    "approximate_entropy_test",
    "berlekamp_massey",
    "binary_matrix_rank_test",
    "block_frequency_test",
    "cumulative_sums_test",
    "dft_test",
    "linear_complexity_test",
    "longest_run_test",
    "non_overlapping_template_test",
    "overlapping_template_test",
    "random_excursions_test",
    "random_excursions_variant_test",
    "runs_test",
    "serial_test",
    "universal_test",
]
