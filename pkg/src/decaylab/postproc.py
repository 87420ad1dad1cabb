"""Mean-threshold binarization of count series."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bitcore import BitSequence, CountSeries
from .errors import DataError


@dataclass(frozen=True)
class ThresholdSummary:
    mean: float
    n_counts: int
    ones_emitted: int
    zeros_emitted: int

    def to_dict(self) -> dict:
        return {
            "mean": self.mean,
            "n_counts": self.n_counts,
            "ones_emitted": self.ones_emitted,
            "zeros_emitted": self.zeros_emitted,
        }


def binarize_mean_threshold(series: CountSeries) -> tuple[BitSequence, ThresholdSummary]:
    """Emit 1 for every count strictly above the series mean, else 0.

    The comparison ``x_i > sum/n`` is done as ``n * x_i > sum`` in integer
    arithmetic, so boundary counts never depend on floating-point rounding.
    """
    n = len(series.counts)
    if n == 0:
        raise DataError("no counts")
    total = sum(series.counts)
    # python ints: no overflow however long the series
    bits = np.fromiter((n * x > total for x in series.counts), dtype=np.uint8, count=n)
    ones = int(bits.sum())
    summary = ThresholdSummary(
        mean=float(Fraction(total, n)),
        n_counts=n,
        ones_emitted=ones,
        zeros_emitted=n - ones,
    )
    return BitSequence.from_array(bits), summary
