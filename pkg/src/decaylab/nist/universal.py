"""Maurer's universal statistical test."""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from ..bitcore import TestResult
from ..special import erfc
from ._common import as_bits, require_nonempty, window_values

# L -> (expected value, variance) of the per-block log2 distance
_EXPECTED = {
    1: (0.7326495, 0.690),
    2: (1.5374383, 1.338),
    3: (2.4016068, 1.901),
    4: (3.3112247, 2.358),
    5: (4.2534266, 2.705),
    6: (5.2177052, 2.954),
    7: (6.1962507, 3.125),
    8: (7.1836656, 3.238),
    9: (8.1764248, 3.311),
    10: (9.1723243, 3.356),
    11: (10.170032, 3.384),
    12: (11.168765, 3.401),
    13: (12.168070, 3.410),
    14: (13.167693, 3.416),
    15: (14.167488, 3.419),
    16: (15.167379, 3.421),
}

# smallest n for which each L is recommended
_MIN_N = {
    6: 387_840,
    7: 904_960,
    8: 2_068_480,
    9: 4_654_080,
    10: 10_342_400,
    11: 22_753_280,
    12: 49_643_520,
    13: 107_560_960,
    14: 231_669_760,
    15: 496_435_200,
    16: 1_059_061_760,
}


def universal_block_length(n: int) -> int:
    L = 5
    for cand, lo in _MIN_N.items():
        if n >= lo:
            L = cand
    return L


def universal_test(
    seq, L: Optional[int] = None, Q: Optional[int] = None, alpha: float = 0.01
) -> TestResult:
    """Compressibility measured by distances between repeated L-bit blocks."""
    bits = as_bits(seq)
    require_nonempty(bits)
    n = bits.size
    if L is None:
        L = universal_block_length(n)
    if L not in _EXPECTED:
        raise ValueError("L must lie in 1..16")
    if Q is None:
        Q = 10 * (1 << L)
    K = n // L - Q
    applicable = L >= 6 and n >= _MIN_N.get(L, math.inf) and Q >= 10 * (1 << L)
    if K < 1:
        return TestResult("universal", (0.0,), False, alpha, {"L": L, "Q": Q, "K": K})
    blocks = window_values(bits[: (Q + K) * L], L, wrap=False)[::L]
    # distance from each test block to the previous occurrence of its value
    order = np.argsort(blocks, kind="stable")
    sorted_vals = blocks[order]
    prev = np.full(blocks.size, -1, dtype=np.int64)
    same = sorted_vals[1:] == sorted_vals[:-1]
    prev[order[1:][same]] = order[:-1][same]
    idx = np.arange(Q, Q + K)
    fn = float(np.sum(np.log2(idx - prev[Q:]))) / K
    expected, variance = _EXPECTED[L]
    c = 0.7 - 0.8 / L + (4 + 32 / L) * K ** (-3 / L) / 15
    sigma = c * math.sqrt(variance / K)
    p = erfc(abs(fn - expected) / (math.sqrt(2) * sigma))
    return TestResult(
        "universal", (p,), applicable, alpha, {"L": L, "Q": Q, "K": K, "fn": fn, "sigma": sigma}
    )
