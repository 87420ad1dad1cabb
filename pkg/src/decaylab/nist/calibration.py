"""Null-hypothesis calibration of the battery on seeded fair-coin streams.

Rejection rates are tallied per reported statistic (each P-value a test
emits), the same granularity at which SP 800-22 judges pass proportions,
and also per test (any P-value below alpha).
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from ..bitcore import BitSequence
from .battery import BatteryConfig, run_battery


def fair_coin_bits(n_bits: int, seed: int) -> BitSequence:
    rng = np.random.default_rng(np.random.SeedSequence([0xFA12C014, int(seed)]))
    raw = np.frombuffer(rng.bytes((n_bits + 7) // 8), dtype=np.uint8)
    return BitSequence(raw, n_bits) if n_bits % 8 == 0 else BitSequence.from_array(
        np.unpackbits(raw, count=n_bits)
    )


@dataclass
class CalibrationTally:
    alpha: float
    n_sequences: int = 0
    # (test, statistic index) -> [applicable runs, rejections]
    per_statistic: dict = field(default_factory=lambda: defaultdict(lambda: [0, 0]))
    per_test: dict = field(default_factory=lambda: defaultdict(lambda: [0, 0]))
    pass_fractions: list = field(default_factory=list)

    def add(self, report):
        self.n_sequences += 1
        self.pass_fractions.append(report.pass_fraction)
        for r in report.results:
            if not r.applicable:
                continue
            self.per_test[r.test_name][0] += 1
            self.per_test[r.test_name][1] += int(not r.passed)
            for i, p in enumerate(r.p_values):
                cell = self.per_statistic[(r.test_name, i)]
                cell[0] += 1
                cell[1] += int(p < self.alpha)

    def statistic_rates(self) -> dict:
        return {k: (rej / app if app else float("nan"), app) for k, (app, rej) in self.per_statistic.items()}

    def test_rates(self) -> dict:
        return {k: (rej / app if app else float("nan"), app) for k, (app, rej) in self.per_test.items()}


def run_calibration(
    n_sequences: int,
    n_bits: int = 1_000_000,
    seeds: Optional[Iterable[int]] = None,
    cfg: Optional[BatteryConfig] = None,
) -> CalibrationTally:
    cfg = cfg or BatteryConfig()
    tally = CalibrationTally(alpha=cfg.alpha)
    seeds = range(n_sequences) if seeds is None else seeds
    for seed in seeds:
        tally.add(run_battery(fair_coin_bits(n_bits, seed), cfg))
    return tally
