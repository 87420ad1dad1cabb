"""Scenario runner: acquire or ingest counts, binarize, self-test, run the
battery and persist everything needed to audit the result."""

from __future__ import annotations

import dataclasses
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from ..bitcore import BitSequence, CountSeries, TestReport, bit_balance
from ..decaysim import (
    ExperimentConfig,
    PlateauPoint,
    acquire,
    expected_rate,
    fit_plateau,
    noise_fraction,
    plateau_scan,
)
from ..errors import DecayLabError
from ..nist import BatteryConfig, report_rows, run_battery
from ..postproc import ThresholdSummary, binarize_mean_threshold
from ..selftest import EntropyProfile, entropy_profile, monobit_test
from . import presets
from .io import format_counts, write_bits

SCHEMA = "decaylab_report_v1"
SCENARIOS = (
    "half_life_comparison",
    "preset_time_comparison",
    "distance_comparison",
    "plateau_scan",
    "custom",
)


@dataclass(frozen=True)
class ScenarioSpec:
    name: str
    arms: tuple[ExperimentConfig, ...]
    target_counts: int = presets.TARGET_COUNTS
    report_path: Optional[str] = None
    arm_labels: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        if self.name not in SCENARIOS:
            raise ValueError(f"unknown scenario {self.name!r}")
        object.__setattr__(self, "arms", tuple(self.arms))
        if not self.arms:
            raise ValueError("scenario needs at least one arm")
        if self.name.endswith("_comparison"):
            if len(self.arms) != 2:
                raise ValueError("comparison scenarios need exactly two arms")
            diff = config_differences(self.arms[0], self.arms[1])
            if len(diff) != 1:
                raise ValueError(f"comparison arms must differ in one parameter, got {diff}")
        if self.arm_labels is not None and len(self.arm_labels) != len(self.arms):
            raise ValueError("one label per arm required")

    @property
    def labels(self) -> tuple[str, ...]:
        if self.arm_labels is not None:
            return tuple(self.arm_labels)
        return tuple(default_label(c) for c in self.arms)


def _flatten(cfg: ExperimentConfig) -> dict:
    out = {}
    for key, value in dataclasses.asdict(cfg).items():
        if isinstance(value, dict):
            out.update({f"{key}.{k}": v for k, v in value.items()})
        else:
            out[key] = value
    return out


def config_differences(a: ExperimentConfig, b: ExperimentConfig) -> list[str]:
    """Modeled parameters that differ; seeds and isotope names are ignored."""
    fa, fb = _flatten(a), _flatten(b)
    skip = {"rng_seed", "source.isotope_label"}
    return [k for k in fa if k not in skip and fa[k] != fb[k]]


def default_label(cfg: ExperimentConfig) -> str:
    d, t = cfg.geometry.distance_cm, cfg.preset_time_s
    return f"{cfg.source.isotope_label} {d:g}cm {t:g}s"


def half_life_comparison(seed: int, target_counts: int = presets.TARGET_COUNTS) -> ScenarioSpec:
    arms = tuple(
        presets.default_config(seed, source=s, run_count=target_counts)
        for s in (presets.CO60, presets.SR90)
    )
    return ScenarioSpec("half_life_comparison", arms, target_counts, arm_labels=("Co-60", "Sr-90"))


def preset_time_comparison(seed: int, target_counts: int = presets.TARGET_COUNTS) -> ScenarioSpec:
    arms = tuple(
        presets.default_config(seed, preset_time_s=t, run_count=target_counts) for t in (1.0, 5.0)
    )
    return ScenarioSpec(
        "preset_time_comparison", arms, target_counts, arm_labels=("Sr-90 1s", "Sr-90 5s")
    )


def distance_comparison(seed: int, target_counts: int = presets.TARGET_COUNTS) -> ScenarioSpec:
    arms = tuple(
        presets.default_config(seed, distance_cm=d, run_count=target_counts) for d in (2.0, 4.0)
    )
    return ScenarioSpec(
        "distance_comparison", arms, target_counts, arm_labels=("Sr-90 2cm", "Sr-90 4cm")
    )


def plateau_scenario(seed: int) -> ScenarioSpec:
    return ScenarioSpec("plateau_scan", (presets.plateau_config(seed),), 1, arm_labels=("Co-60",))


BUILDERS = {
    "half_life_comparison": half_life_comparison,
    "preset_time_comparison": preset_time_comparison,
    "distance_comparison": distance_comparison,
    "plateau_scan": lambda seed, target_counts=None: plateau_scenario(seed),
}


@dataclass
class ArmResult:
    label: str
    series: CountSeries
    bits: BitSequence
    threshold: ThresholdSummary
    profile: EntropyProfile
    balance: tuple[float, float]
    monobit: object
    battery: TestReport
    battery_config: BatteryConfig
    config: Optional[ExperimentConfig] = None
    files: dict = field(default_factory=dict)

    def summary(self) -> dict:
        out = {
            "label": self.label,
            "source": {
                "source": self.series.source_label,
                "preset_time_s": self.series.preset_time_s,
                "distance_cm": self.series.distance_cm,
                "voltage": self.series.applied_voltage_V,
                "run_count": self.series.run_count,
            },
            "config": dataclasses.asdict(self.config) if self.config else None,
            "files": dict(self.files),
            "threshold": self.threshold.to_dict(),
            "balance": {"fraction_zeros": self.balance[0], "fraction_ones": self.balance[1]},
            "monobit": self.monobit.to_dict(),
            "entropy": self.profile.summary(),
            "battery": {
                "config": self.battery_config.to_dict(),
                **self.battery.to_dict(),
                "rows": report_rows(self.battery),
            },
        }
        if self.config is not None:
            out["model"] = {
                "expected_rate_cps": expected_rate(self.config),
                "noise_fraction": noise_fraction(self.config),
            }
        return out


def _jsonable(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


@dataclass
class ComparisonReport:
    scenario: str
    arms: list[ArmResult]
    verdicts: list[str]
    seed: Optional[int] = None
    plateau: Optional[dict] = None
    error: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "scenario": self.scenario,
            "seed": self.seed,
            "status": "error" if self.error else "ok",
            "error": self.error,
            "arms": [a.summary() for a in self.arms],
            "plateau": self.plateau,
            "verdicts": list(self.verdicts),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False, default=_jsonable) + "\n"


def analyze_series(
    series: CountSeries,
    label: str,
    battery_config: Optional[BatteryConfig] = None,
    window_size: Optional[int] = None,
    stride: int = 1,
    config: Optional[ExperimentConfig] = None,
) -> ArmResult:
    """Binarize a count series and run the self-tests and the battery."""
    battery_config = battery_config or BatteryConfig()
    bits, summary = binarize_mean_threshold(series)
    return ArmResult(
        label=label,
        series=series,
        bits=bits,
        threshold=summary,
        profile=entropy_profile(bits, window_size, stride),
        balance=bit_balance(bits),
        monobit=monobit_test(bits, alpha=battery_config.alpha),
        battery=run_battery(bits, battery_config),
        battery_config=battery_config,
        config=config,
    )


def _pct(x: float) -> str:
    return f"{100 * x:.2f}%"


def verdicts_for(arms: list[ArmResult]) -> list[str]:
    """Ordered conclusions drawn only from the per-arm metrics."""
    if len(arms) < 2:
        return []
    a, b = arms[0], arms[1]
    out = []
    metrics = (
        ("mean entropy", lambda r: r.profile.mean_entropy),
        ("NIST pass fraction", lambda r: r.battery.pass_fraction),
        ("bit balance (closeness of ones to 50%)", lambda r: -abs(r.balance[1] - 0.5)),
    )
    for name, key in metrics:
        ka, kb = key(a), key(b)
        if ka == kb:
            out.append(f"{name}: tie between {a.label} and {b.label}")
        else:
            win, lose = (a, b) if ka > kb else (b, a)
            out.append(f"{name}: {win.label} higher than {lose.label}")
    out.append(
        f"mean entropy {a.label}={_pct(a.profile.mean_entropy)}, {b.label}={_pct(b.profile.mean_entropy)}"
    )
    out.append(
        f"pass fraction {a.label}={_pct(a.battery.pass_fraction)}, "
        f"{b.label}={_pct(b.battery.pass_fraction)}"
    )
    return out


def _slug(label: str) -> str:
    return re.sub(r"[^A-Za-z0-9]+", "_", label).strip("_").lower() or "arm"


def persist_arm(arm: ArmResult, out_dir: Path):
    slug = _slug(arm.label)
    counts_name, bits_name = f"{slug}_counts.csv", f"{slug}_bits.txt"
    (out_dir / counts_name).write_text(format_counts(arm.series))
    write_bits(arm.bits, out_dir / bits_name)
    arm.files = {"counts": counts_name, "bits": bits_name}


def _plateau_section(cfg: ExperimentConfig) -> tuple[dict, list[PlateauPoint]]:
    v0, step, n = presets.PLATEAU_SCAN
    scan = plateau_scan(cfg, v0, step, n)
    section = {
        "config": dataclasses.asdict(cfg),
        "points": [
            {"voltage": p.voltage, "counts": p.counts, "breakdown": p.breakdown} for p in scan
        ],
    }
    try:
        fit = fit_plateau(scan)
        section["fit"] = fit._asdict()
    except ValueError as exc:
        section["fit"] = None
        section["fit_error"] = str(exc)
    return section, scan


def run_scenario(
    spec: ScenarioSpec,
    out_dir,
    seed: Optional[int] = None,
    battery_config: Optional[BatteryConfig] = None,
) -> ComparisonReport:
    """Execute every arm and write ``report.json`` plus per-arm sidecars.

    An arm failure stops the run; arms already finished and a report with
    ``status: error`` are still written before the error propagates.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    report_path = Path(spec.report_path) if spec.report_path else out_dir / "report.json"
    report = ComparisonReport(spec.name, [], [], seed=seed)

    if spec.name == "plateau_scan":
        report.plateau, _ = _plateau_section(spec.arms[0])
        report_path.write_text(report.to_json())
        return report

    try:
        for cfg, label in zip(spec.arms, spec.labels):
            series = acquire(cfg)
            arm = analyze_series(series, label, battery_config, config=cfg)
            persist_arm(arm, out_dir)
            report.arms.append(arm)
    except DecayLabError as exc:
        report.error = str(exc)
        report.verdicts = verdicts_for(report.arms)
        report_path.write_text(report.to_json())
        raise
    report.verdicts = verdicts_for(report.arms)
    report_path.write_text(report.to_json())
    return report
