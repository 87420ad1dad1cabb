"""SP 800-22 battery: configuration, canonical order and the runner."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..bitcore import BitSequence, TestReport, TestResult
from ..selftest import monobit_test
from .complexity import linear_complexity_test
from .entropy import approximate_entropy_test, serial_test
from .excursions import random_excursions_test, random_excursions_variant_test
from .frequency import block_frequency_test, cumulative_sums_test
from .rank import binary_matrix_rank_test
from .runs import longest_run_test, runs_test
from .spectral import dft_test
from .templates import non_overlapping_template_test, overlapping_template_test
from .universal import universal_test

TEST_ORDER = (
    "frequency",
    "block_frequency",
    "cumulative_sums",
    "runs",
    "longest_run",
    "rank",
    "dft",
    "non_overlapping_template",
    "overlapping_template",
    "universal",
    "approximate_entropy",
    "serial",
    "linear_complexity",
    "random_excursions",
    "random_excursions_variant",
)

MIN_BATTERY_BITS = 100


@dataclass(frozen=True)
class BatteryConfig:
    """Battery parameters.

    ``None`` for ``block_length_M``, ``serial_m`` or ``approx_entropy_m``
    selects the largest value the input-size recommendations allow for the
    sequence being tested.
    """

    alpha: float = 0.01
    block_length_M: Optional[int] = None
    template_length_m: int = 9
    serial_m: Optional[int] = None
    approx_entropy_m: Optional[int] = None
    linear_complexity_M: int = 500
    enabled_tests: frozenset = field(default_factory=lambda: frozenset(TEST_ORDER))

    def __post_init__(self):
        if not 0 < self.alpha < 0.5:
            raise ValueError("alpha must lie in (0, 0.5)")
        unknown = set(self.enabled_tests) - set(TEST_ORDER)
        if unknown:
            raise ValueError(f"unknown tests: {sorted(unknown)}")
        object.__setattr__(self, "enabled_tests", frozenset(self.enabled_tests))

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "block_length_M": self.block_length_M,
            "template_length_m": self.template_length_m,
            "serial_m": self.serial_m,
            "approx_entropy_m": self.approx_entropy_m,
            "linear_complexity_M": self.linear_complexity_M,
            "enabled_tests": [t for t in TEST_ORDER if t in self.enabled_tests],
        }


def _dispatch(name: str, bits, cfg: BatteryConfig, seq: BitSequence) -> TestResult:
    a = cfg.alpha
    if name == "frequency":
        return monobit_test(seq, alpha=a)
    if name == "block_frequency":
        return block_frequency_test(bits, cfg.block_length_M, alpha=a)
    if name == "cumulative_sums":
        return cumulative_sums_test(bits, alpha=a)
    if name == "runs":
        return runs_test(bits, alpha=a)
    if name == "longest_run":
        return longest_run_test(bits, alpha=a)
    if name == "rank":
        return binary_matrix_rank_test(bits, alpha=a)
    if name == "dft":
        return dft_test(bits, alpha=a)
    if name == "non_overlapping_template":
        return non_overlapping_template_test(bits, m=cfg.template_length_m, alpha=a)
    if name == "overlapping_template":
        return overlapping_template_test(bits, m=cfg.template_length_m, alpha=a)
    if name == "universal":
        return universal_test(bits, alpha=a)
    if name == "approximate_entropy":
        return approximate_entropy_test(bits, cfg.approx_entropy_m, alpha=a)
    if name == "serial":
        return serial_test(bits, cfg.serial_m, alpha=a)
    if name == "linear_complexity":
        return linear_complexity_test(bits, cfg.linear_complexity_M, alpha=a)
    if name == "random_excursions":
        return random_excursions_test(bits, alpha=a)
    if name == "random_excursions_variant":
        return random_excursions_variant_test(bits, alpha=a)
    raise KeyError(name)


def run_battery(seq: BitSequence, cfg: Optional[BatteryConfig] = None) -> TestReport:
    """Run every enabled test, in canonical order.

    Tests whose input-size recommendation is not met are still evaluated
    where possible but come back with ``applicable=False`` and are left out
    of the pass fraction.
    """
    cfg = cfg or BatteryConfig()
    if seq.n_bits < MIN_BATTERY_BITS:
        raise ValueError("sequence too short for battery")
    bits = seq.bits
    results = []
    for name in TEST_ORDER:
        if name not in cfg.enabled_tests:
            continue
        try:
            results.append(_dispatch(name, bits, cfg, seq))
        except ValueError as exc:
            # parameters impossible at this length (e.g. block longer than input)
            results.append(TestResult(name, (0.0,), False, cfg.alpha, {"error": str(exc)}))
    return TestReport(tuple(results), seq.n_bits)


def report_rows(report: TestReport) -> list[dict]:
    """One row per reported statistic; cumulative sums contributes two
    rows (forward and backward), so the full battery yields 16 rows."""
    rows = []
    for r in report.results:
        if r.test_name == "cumulative_sums":
            for label, p in zip(("forward", "backward"), r.p_values):
                rows.append(
                    {
                        "name": f"cumulative_sums_{label}",
                        "p_value": p,
                        "applicable": r.applicable,
                        "passed": r.applicable and p >= r.alpha,
                    }
                )
        else:
            rows.append(
                {
                    "name": r.test_name,
                    "p_value": r.p_value,
                    "applicable": r.applicable,
                    "passed": r.passed,
                }
            )
    return rows
