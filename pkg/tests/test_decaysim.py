import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from conftest import DATA
from decaylab.decaysim import (
    DetectorModel,
    ExperimentConfig,
    GeometryModel,
    SourceModel,
    acquire,
    background_rate,
    dead_time_correct,
    expected_rate,
    find_operating_voltage,
    fit_plateau,
    geometric_acceptance,
    noise_fraction,
    observed_rate,
    plateau_scan,
    signal_rate,
)
from decaylab.errors import ModelError
from decaylab.harness import presets


def load_bench_scan():
    rows = np.loadtxt(DATA / "co60_plateau_scan.csv", delimiter=",", comments="#", skiprows=2)
    return [(float(v), int(c)) for v, c in rows]


def disc_acceptance_quad(d, r):
    # fraction of 4 pi subtended by a disc: integrate d / (rho^2 + d^2)^(3/2) over the disc
    val, _ = integrate.quad(lambda rho: d * rho / (rho * rho + d * d) ** 1.5, 0, r, epsabs=1e-14)
    return 2 * math.pi * val / (4 * math.pi)


def make_cfg(rate=1000.0, **kw):
    base = dict(
        source=SourceModel("test", 10.0, rate),
        geometry=GeometryModel(2.0),
        detector=DetectorModel(),
        preset_time_s=1.0,
        run_count=100,
        applied_voltage_V=900.0,
        rng_seed=1,
    )
    base.update(kw)
    return ExperimentConfig(**base)


def test_acceptance_closed_form():
    assert geometric_acceptance(math.sqrt(3), 1.0) == pytest.approx((1 - math.sqrt(3) / 2) / 2, abs=1e-15)
    assert geometric_acceptance(math.sqrt(3), 1.0) == pytest.approx(0.066987, abs=1e-6)
    assert geometric_acceptance(1e-12, 1.0) == pytest.approx(0.5, abs=1e-11)


@pytest.mark.parametrize("d, r", [(0.5, 1.0), (math.sqrt(3), 1.0), (2.0, 1.0), (4.0, 1.0), (50.0, 0.3)])
def test_acceptance_matches_disc_integration(d, r):
    assert geometric_acceptance(d, r) == pytest.approx(disc_acceptance_quad(d, r), rel=1e-10)


@given(st.floats(0.01, 100), st.floats(0.01, 100), st.floats(0.1, 10))
def test_acceptance_decreasing_in_distance(d1, delta, r):
    g1 = geometric_acceptance(d1, r)
    assert 0 < g1 <= 0.5
    assert geometric_acceptance(d1 + delta, r) < g1


def test_half_life_halves_source():
    s0 = SourceModel("x", 5.3, 800.0, 0.0)
    s1 = SourceModel("x", 5.3, 800.0, 5.3)
    assert s1.effective_rate == s0.effective_rate / 2


def test_efficiency_shape():
    det = DetectorModel()
    assert det.efficiency(700.0) == 0.0
    assert det.efficiency(det.starting_voltage_V) == 0.0
    assert det.efficiency(det.knee_voltage_V) == pytest.approx(det.intrinsic_efficiency)
    volts = np.arange(705, 721, 1.0)
    effs = [det.efficiency(v) for v in volts]
    assert all(b >= a for a, b in zip(effs, effs[1:]))
    # plateau slope per 100 V, relative to the knee value
    e1, e2 = det.efficiency(800.0), det.efficiency(900.0)
    assert (e2 - e1) / det.efficiency(720.0) == pytest.approx(det.plateau_slope_per_100V)


def test_breakdown_raises():
    cfg = make_cfg(applied_voltage_V=1200.0)
    with pytest.raises(ModelError, match="breakdown region"):
        expected_rate(cfg)
    with pytest.raises(ModelError):
        acquire(cfg)


def test_zero_rate_gives_zero_counts():
    cfg = make_cfg(rate=0.0, detector=DetectorModel(background_cps=0.0))
    assert set(acquire(cfg).counts) == {0}


def test_run_count_zero_rejected():
    with pytest.raises(ValueError):
        acquire(make_cfg(run_count=0))


def test_acquire_deterministic():
    cfg = make_cfg(run_count=500)
    assert acquire(cfg) == acquire(cfg)
    assert acquire(cfg) != acquire(cfg.with_(rng_seed=2))


def test_noise_fraction_grows_with_distance():
    near, far = make_cfg(geometry=GeometryModel(2.0)), make_cfg(geometry=GeometryModel(4.0))
    assert expected_rate(far) < expected_rate(near)
    assert noise_fraction(far) > noise_fraction(near)
    assert background_rate(far) / background_rate(near) == pytest.approx(2.0 / 1.5)
    assert signal_rate(near) + background_rate(near) == expected_rate(near)


def _poisson_cfg(seed, runs=10_000):
    # tune the source so that the true rate is exactly 100 counts per window
    det = DetectorModel(dead_time_s=0.0, background_cps=0.0)
    geo = GeometryModel(2.0)
    eff = det.efficiency(900.0)
    rate = 100.0 / (geo.acceptance * eff)
    return make_cfg(rate=rate, geometry=geo, detector=det, run_count=runs, rng_seed=seed)


def test_poisson_moments():
    cfg = _poisson_cfg(0)
    assert expected_rate(cfg) == pytest.approx(100.0, rel=1e-12)
    x = acquire(cfg).as_array()
    assert abs(x.mean() - 100) <= 0.3
    assert 0.94 <= x.var(ddof=1) / x.mean() <= 1.06


def event_level_observed_rate(true_rate, tau, t_total, seed):
    """Non-paralyzable counter fed by explicit exponential arrivals."""
    rng = np.random.default_rng(seed)
    n = rng.poisson(true_rate * t_total)
    times = np.sort(rng.uniform(0, t_total, n))
    recorded, busy_until = 0, -1.0
    for t in times:
        if t >= busy_until:
            recorded += 1
            busy_until = t + tau
    return recorded / t_total


@pytest.mark.parametrize("n_tau", [0.05, 0.1, 0.2])
def test_dead_time_against_event_simulation(n_tau):
    tau = 1e-4
    n = n_tau / tau
    sim = event_level_observed_rate(n, tau, 20.0, seed=int(n_tau * 100))
    assert sim == pytest.approx(n / (1 + n_tau), rel=0.02)
    assert observed_rate(n, tau) == pytest.approx(n / (1 + n_tau), rel=1e-12)
    k = np.array([int(n)])
    assert dead_time_correct(k, 1.0, tau)[0] == round(n / (1 + n_tau))


def test_dead_time_rounds_half_to_even():
    k = np.array([5, 3])
    tau = 1.0 / 5.0  # 5 -> 2.5 (tie), 3 -> 1.875
    assert dead_time_correct(k, 1.0, tau).tolist() == [2, 2]


def test_bench_scan_operating_voltage():
    scan = load_bench_scan()
    assert len(scan) == 23
    fit = fit_plateau(scan)
    assert fit.knee_V == 720.0
    assert (fit.plateau_start_V, fit.plateau_end_V) == (720.0, 1140.0)
    assert find_operating_voltage(scan) in (920.0, 940.0)


def test_flat_synthetic_plateau():
    assert find_operating_voltage([(700, 0), (720, 1000), (740, 1000), (760, 1000)]) == 740.0


def test_steep_scan_has_no_plateau():
    scan = [(700 + 20 * i, 10 * 2**i) for i in range(10)]
    with pytest.raises(ValueError, match="no plateau"):
        find_operating_voltage(scan)


def test_simulated_plateau_scan_shape():
    cfg = presets.plateau_config(5)
    scan = plateau_scan(cfg, *presets.PLATEAU_SCAN)
    assert len(scan) == 23
    assert scan[0].counts == 0  # below the starting voltage
    counts = [p.counts for p in scan if p.counts is not None]
    first = next(c for c in counts if c > 0)
    assert first / max(counts) >= 0.5
    assert 900 <= first <= 1300 and max(counts) < 1700


def test_plateau_scan_flags_breakdown():
    cfg = presets.plateau_config(5)
    scan = plateau_scan(cfg, 1100.0, 50.0, 4)
    assert [p.breakdown for p in scan] == [False, False, True, True]
    assert scan[2].counts is None


def test_flat_plateau_shares_one_mean():
    det = DetectorModel(plateau_slope_per_100V=0.0, dead_time_s=0.0)
    cfg = make_cfg(detector=det, preset_time_s=30.0)
    rates = {expected_rate(cfg.with_(applied_voltage_V=v)) for v in (740.0, 900.0, 1100.0)}
    assert len(rates) == 1
