"""Monte Carlo model of a decay source, shelf geometry and GM counter.

The chain is deliberately simple: an exponentially decaying source rate,
the on-axis solid-angle fraction of a disc window, a voltage-dependent
counting efficiency (zero, logistic rise, linear plateau, breakdown),
Poisson counts per preset window and a non-paralyzable dead-time loss.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .bitcore import CountSeries
from .errors import ModelError

_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class SourceModel:
    isotope_label: str
    half_life_years: float
    initial_rate_cps: float
    elapsed_time_years: float = 0.0

    def __post_init__(self):
        if not self.half_life_years > 0:
            raise ValueError("half_life_years must be positive")
        if self.initial_rate_cps < 0:
            raise ValueError("initial_rate_cps must be non-negative")
        if self.elapsed_time_years < 0:
            raise ValueError("elapsed_time_years must be non-negative")

    @property
    def effective_rate(self) -> float:
        """Decays per second into 4 pi after ``elapsed_time_years``."""
        return self.initial_rate_cps * 2.0 ** (-self.elapsed_time_years / self.half_life_years)


def geometric_acceptance(distance_cm: float, window_radius_cm: float) -> float:
    """Fraction of isotropic emissions from an on-axis point that hit a disc.

    ``(1 - d / sqrt(d**2 + r**2)) / 2``; tends to 1/2 as ``d -> 0``.
    """
    if distance_cm < 0 or not window_radius_cm > 0:
        raise ValueError("distance must be >= 0 and window radius > 0")
    d, r = distance_cm, window_radius_cm
    # 1 - d/sqrt(d^2+r^2) rewritten to avoid cancellation at large d
    h = math.hypot(d, r)
    return 0.5 * (r * r) / (h * (h + d))


@dataclass(frozen=True)
class GeometryModel:
    distance_cm: float
    window_radius_cm: float = 1.0
    scatter_noise_coeff: float = 0.25

    def __post_init__(self):
        if not self.distance_cm > 0:
            raise ValueError("distance_cm must be positive")
        if not self.window_radius_cm > 0:
            raise ValueError("window_radius_cm must be positive")
        if self.scatter_noise_coeff < 0:
            raise ValueError("scatter_noise_coeff must be non-negative")

    @property
    def acceptance(self) -> float:
        return geometric_acceptance(self.distance_cm, self.window_radius_cm)

    @property
    def noise_multiplier(self) -> float:
        return 1.0 + self.scatter_noise_coeff * self.distance_cm


@dataclass(frozen=True)
class DetectorModel:
    """GM tube response.

    Efficiency is 0 below ``starting_voltage_V``, rises along a logistic
    curve to ``intrinsic_efficiency`` at the knee, then grows linearly by
    ``plateau_slope_per_100V`` (fraction of the knee value) per 100 V until
    breakdown.
    """

    dead_time_s: float = 1.0e-4
    knee_voltage_V: float = 720.0
    breakdown_voltage_V: float = 1200.0
    plateau_slope_per_100V: float = 0.07
    intrinsic_efficiency: float = 0.9
    background_cps: float = 0.5
    starting_voltage_V: float = 705.0
    rise_steepness: float = 6.0

    def __post_init__(self):
        if self.dead_time_s < 0:
            raise ValueError("dead_time_s must be non-negative")
        if not 0 < self.starting_voltage_V < self.knee_voltage_V < self.breakdown_voltage_V:
            raise ValueError("need 0 < starting voltage < knee voltage < breakdown voltage")
        if self.plateau_slope_per_100V < 0:
            raise ValueError("plateau_slope_per_100V must be non-negative")
        if not 0 < self.intrinsic_efficiency <= 1:
            raise ValueError("intrinsic_efficiency must lie in (0, 1]")
        if self.background_cps < 0:
            raise ValueError("background_cps must be non-negative")

    def efficiency(self, voltage: float) -> float:
        if voltage >= self.breakdown_voltage_V:
            raise ModelError(
                f"breakdown region: {voltage} V >= breakdown voltage {self.breakdown_voltage_V} V"
            )
        if voltage < self.starting_voltage_V:
            return 0.0
        eff = self.intrinsic_efficiency
        if voltage < self.knee_voltage_V:
            return eff * self._rise(voltage)
        return eff * (1.0 + self.plateau_slope_per_100V * (voltage - self.knee_voltage_V) / 100.0)

    def _rise(self, voltage: float) -> float:
        # logistic on [start, knee] rescaled to run exactly from 0 to 1
        lo, hi = self.starting_voltage_V, self.knee_voltage_V
        z = self.rise_steepness * ((voltage - lo) / (hi - lo) - 0.5)
        z0 = -0.5 * self.rise_steepness
        s, s0, s1 = (1 / (1 + math.exp(-t)) for t in (z, z0, -z0))
        return (s - s0) / (s1 - s0)

    def counting_active(self, voltage: float) -> bool:
        return self.starting_voltage_V <= voltage < self.breakdown_voltage_V


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to reproduce one simulated acquisition."""

    source: SourceModel
    geometry: GeometryModel
    detector: DetectorModel
    preset_time_s: float
    run_count: int
    applied_voltage_V: float
    rng_seed: int

    def __post_init__(self):
        if not self.preset_time_s > 0:
            raise ValueError("preset_time_s must be positive")
        if not self.applied_voltage_V > 0:
            raise ValueError("applied_voltage_V must be positive")

    def with_(self, **changes) -> "ExperimentConfig":
        return replace(self, **changes)


def signal_rate(cfg: ExperimentConfig) -> float:
    """Expected detected source counts per second (no background)."""
    return (
        cfg.source.effective_rate
        * cfg.geometry.acceptance
        * cfg.detector.efficiency(cfg.applied_voltage_V)
    )


def background_rate(cfg: ExperimentConfig) -> float:
    """Background rate inflated by distance-proportional scatter noise."""
    return cfg.detector.background_cps * cfg.geometry.noise_multiplier


def expected_rate(cfg: ExperimentConfig) -> float:
    """True (pre dead-time) count rate in counts/second.

    Raises
    ------
    ModelError
        If the applied voltage is at or above breakdown.
    """
    signal = signal_rate(cfg)
    # below the starting voltage the tube registers nothing, background included
    if not cfg.detector.counting_active(cfg.applied_voltage_V):
        return 0.0
    return signal + background_rate(cfg)


def noise_fraction(cfg: ExperimentConfig) -> float:
    """background / (signal + background) at the configured operating point."""
    total = expected_rate(cfg)
    if total == 0:
        return 0.0
    return background_rate(cfg) / total


def dead_time_correct(counts: np.ndarray, preset_time_s: float, dead_time_s: float) -> np.ndarray:
    """Non-paralyzable loss ``m = k / (1 + (k/t) tau)``, rounded half to even."""
    k = np.asarray(counts, dtype=float)
    if dead_time_s == 0:
        return np.asarray(counts, dtype=np.int64)
    m = k / (1.0 + (k / preset_time_s) * dead_time_s)
    return np.rint(m).astype(np.int64)


def observed_rate(true_rate: float, dead_time_s: float) -> float:
    return true_rate / (1.0 + true_rate * dead_time_s)


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed) & _SEED_MASK, *stream]))


def acquire(cfg: ExperimentConfig) -> CountSeries:
    """Simulate ``cfg.run_count`` preset-time windows of the counter."""
    if cfg.run_count < 1:
        raise ValueError("run_count must be at least 1")
    rate = expected_rate(cfg)
    rng = make_rng(cfg.rng_seed)
    raw = rng.poisson(rate * cfg.preset_time_s, size=cfg.run_count)
    counts = dead_time_correct(raw, cfg.preset_time_s, cfg.detector.dead_time_s)
    return CountSeries(
        counts=tuple(counts.tolist()),
        preset_time_s=cfg.preset_time_s,
        source_label=cfg.source.isotope_label,
        distance_cm=cfg.geometry.distance_cm,
        applied_voltage_V=cfg.applied_voltage_V,
    )


class PlateauPoint(NamedTuple):
    voltage: float
    counts: Optional[int]
    breakdown: bool = False


def plateau_scan(
    cfg: ExperimentConfig, v_start: float, v_step: float, n_steps: int
) -> list[PlateauPoint]:
    """Record one preset-time count per voltage step, all else fixed.

    Points at or beyond breakdown are kept with ``counts=None`` and
    ``breakdown=True``.
    """
    if not v_step > 0:
        raise ValueError("v_step must be positive")
    if n_steps < 3:
        raise ValueError("n_steps must be at least 3")
    points = []
    for i in range(n_steps):
        v = v_start + i * v_step
        if v >= cfg.detector.breakdown_voltage_V:
            points.append(PlateauPoint(v, None, True))
            continue
        point_cfg = cfg.with_(applied_voltage_V=v, run_count=1)
        rate = expected_rate(point_cfg)
        k = make_rng(cfg.rng_seed, i).poisson(rate * cfg.preset_time_s)
        m = dead_time_correct(np.array([k]), cfg.preset_time_s, cfg.detector.dead_time_s)[0]
        points.append(PlateauPoint(v, int(m)))
    return points


class PlateauFit(NamedTuple):
    knee_V: float
    plateau_start_V: float
    plateau_end_V: float
    operating_V: float


def _relative_slope_per_100V(volts: np.ndarray, counts: np.ndarray) -> float:
    slope = np.polyfit(volts, counts, 1)[0]
    return abs(slope) * 100.0 / counts.mean()


def fit_plateau(
    scan: Sequence, max_change_per_100V: float = 0.15, knee_fraction: float = 0.5
) -> PlateauFit:
    """Locate knee, plateau and operating voltage in a plateau scan.

    The knee is the first voltage whose count reaches ``knee_fraction`` of
    the scan maximum. The plateau is the longest run of consecutive scan
    points starting at the knee whose least-squares slope, relative to the
    run's mean count, is at most ``max_change_per_100V`` per 100 V. The
    operating voltage is the plateau midpoint snapped to the nearest
    scanned voltage (lower one on a tie).
    """
    pts = sorted(
        (float(p[0]), int(p[1])) for p in scan if p[1] is not None and not _is_breakdown(p)
    )
    volts = np.array([v for v, _ in pts])
    counts = np.array([c for _, c in pts], dtype=float)
    if np.count_nonzero(counts) < 3:
        raise ValueError("plateau fit needs at least 3 points with nonzero counts")
    knee = int(np.argmax(counts >= knee_fraction * counts.max()))
    end = None
    for j in range(len(pts) - 1, knee, -1):
        seg_v, seg_c = volts[knee : j + 1], counts[knee : j + 1]
        if seg_c.mean() > 0 and _relative_slope_per_100V(seg_v, seg_c) <= max_change_per_100V:
            end = j
            break
    if end is None:
        raise ValueError("no plateau")
    mid = 0.5 * (volts[knee] + volts[end])
    candidates = volts[knee : end + 1]
    operating = float(candidates[np.argmin(np.abs(candidates - mid))])
    return PlateauFit(float(volts[knee]), float(volts[knee]), float(volts[end]), operating)


def _is_breakdown(p) -> bool:
    return len(p) > 2 and bool(p[2])


def find_operating_voltage(scan: Sequence, max_change_per_100V: float = 0.15) -> float:
    """Midpoint of the counting plateau, snapped to a scanned voltage."""
    return fit_plateau(scan, max_change_per_100V).operating_V
