from .io import ingest_counts, read_bits, write_bits, write_counts
from .plotdata import emit_plot_data
from .scenarios import (
    BUILDERS,
    SCHEMA,
    ComparisonReport,
    ScenarioSpec,
    analyze_series,
    run_scenario,
)

__all__ = [
    "BUILDERS",
    "SCHEMA",
    "ComparisonReport",
    "ScenarioSpec",
    "analyze_series",
    "emit_plot_data",
    "ingest_counts",
    "read_bits",
    "run_scenario",
    "write_bits",
    "write_counts",
]
