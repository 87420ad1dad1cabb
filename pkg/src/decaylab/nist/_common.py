from __future__ import annotations

import numpy as np

from ..bitcore import BitSequence


def as_bits(seq) -> np.ndarray:
    if isinstance(seq, BitSequence):
        return seq.bits
    return np.asarray(seq, dtype=np.uint8)


def require_nonempty(bits: np.ndarray):
    if bits.size == 0:
        raise ValueError("empty bitstream")


def window_values(bits: np.ndarray, m: int, wrap: bool) -> np.ndarray:
    """Integer value of every m-bit window, first bit most significant.

    With ``wrap`` the sequence is extended by its first ``m - 1`` bits and
    there are exactly ``n`` windows; otherwise ``n - m + 1``.
    """
    n = bits.size
    if wrap:
        ext = np.concatenate((bits, bits[: m - 1]))
        count = n
    else:
        ext = bits
        count = n - m + 1
    v = np.zeros(max(count, 0), dtype=np.int64)
    for k in range(m):
        v <<= 1
        v |= ext[k : k + count]
    return v


def pattern_counts(bits: np.ndarray, m: int) -> np.ndarray:
    """Counts of all 2**m overlapping patterns with wrap-around."""
    if m == 0:
        return np.array([bits.size])
    return np.bincount(window_values(bits, m, wrap=True), minlength=1 << m)


def chi2_counts(observed: np.ndarray, expected: np.ndarray) -> float:
    observed = np.asarray(observed, dtype=float)
    expected = np.asarray(expected, dtype=float)
    return float(np.sum((observed - expected) ** 2 / expected))
