"""Self-tests applied to generated bits: monobit frequency and
sliding-window Shannon entropy."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bitcore import BitSequence, TestResult
from .special import erfc

MONOBIT_MIN_BITS = 100


@dataclass(frozen=True)
class EntropyProfile:
    window_size: int
    stride: int
    entropies: np.ndarray
    mean_entropy: float

    @property
    def n_windows(self) -> int:
        return int(self.entropies.size)

    def summary(self) -> dict:
        return {
            "window_size": self.window_size,
            "stride": self.stride,
            "n_windows": self.n_windows,
            "mean_entropy": self.mean_entropy,
            "mean_entropy_percent": 100.0 * self.mean_entropy,
            "min_entropy": float(self.entropies.min()),
            "max_entropy": float(self.entropies.max()),
        }


def _binary_entropy(p: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    q = 1.0 - p
    with np.errstate(divide="ignore", invalid="ignore"):
        # 0.0 - x rather than -x so a constant window gives +0.0
        h = 0.0 - (np.where(p > 0, p * np.log2(p), 0.0) + np.where(q > 0, q * np.log2(q), 0.0))
    return h


def shannon_entropy(window: BitSequence) -> float:
    """Entropy in bits of the empirical 0/1 distribution of ``window``."""
    if window.n_bits == 0:
        raise ValueError("empty window")
    return float(_binary_entropy(window.count_ones() / window.n_bits))


def default_window_size(n_bits: int) -> int:
    return max(10, n_bits // 10)


def entropy_profile(
    seq: BitSequence, window_size: Optional[int] = None, stride: int = 1
) -> EntropyProfile:
    """Shannon entropy of every window position, slid by ``stride`` bits.

    ``window_size`` defaults to a tenth of the sequence (at least 10).
    """
    n = seq.n_bits
    if window_size is None:
        window_size = default_window_size(n)
    if window_size < 1:
        raise ValueError("window_size must be positive")
    if stride < 1:
        raise ValueError("stride must be positive")
    if window_size > n:
        raise ValueError(f"window_size {window_size} exceeds sequence length {n}")
    csum = np.concatenate(([0], np.cumsum(seq.bits, dtype=np.int64)))
    starts = np.arange(0, n - window_size + 1, stride)
    ones = csum[starts + window_size] - csum[starts]
    h = _binary_entropy(ones / window_size)
    return EntropyProfile(window_size, stride, h, float(h.mean()))


def monobit_test(seq: BitSequence, alpha: float = 0.01) -> TestResult:
    """Frequency (monobit) test.

    P = erfc(|S_n| / sqrt(2 n)) where S_n is the +/-1 partial sum. Flagged
    not applicable below 100 bits.
    """
    n = seq.n_bits
    if n == 0:
        raise ValueError("empty bitstream")
    s_n = 2 * seq.count_ones() - n
    s_obs = abs(s_n) / math.sqrt(n)
    p = erfc(s_obs / math.sqrt(2.0))
    return TestResult(
        "frequency",
        (p,),
        applicable=n >= MONOBIT_MIN_BITS,
        alpha=alpha,
        detail={"S_n": s_n, "s_obs": s_obs},
    )
