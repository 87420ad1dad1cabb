"""Linear complexity test built on a block-parallel Berlekamp-Massey."""

from __future__ import annotations

import numpy as np

from ..bitcore import TestResult
from ..special import igamc
from ._common import as_bits, chi2_counts, require_nonempty

# limiting class probabilities for T = (-1)^M (L - mu) + 2/9
_PI = np.array([1 / 96, 1 / 32, 1 / 8, 1 / 2, 1 / 4, 1 / 16, 1 / 48])


def berlekamp_massey(block) -> int:
    """Linear complexity of one binary sequence (reference implementation)."""
    s = [int(b) for b in block]
    n = len(s)
    c = [0] * (n + 1)
    b = [0] * (n + 1)
    c[0] = b[0] = 1
    L, m = 0, -1
    for i in range(n):
        d = s[i]
        for j in range(1, L + 1):
            d ^= c[j] & s[i - j]
        if d:
            t = c[:]
            shift = i - m
            for j in range(n + 1 - shift):
                c[j + shift] ^= b[j]
            if 2 * L <= i:
                L = i + 1 - L
                m = i
                b = t
    return L


def _shl1(words: np.ndarray) -> np.ndarray:
    """Multiply packed GF(2) polynomials by x (bit i lives in word i // 64)."""
    out = words << np.uint64(1)
    out[:, 1:] |= words[:, :-1] >> np.uint64(63)
    return out


def linear_complexities(blocks: np.ndarray) -> np.ndarray:
    """Berlekamp-Massey run on every row of a 0/1 matrix at once.

    Connection polynomial C, the shifted previous polynomial x^k B and the
    reversed recent-history register are kept as packed uint64 words so
    every step is a handful of vector operations over all blocks.
    """
    N, M = blocks.shape
    W = (M + 1) // 64 + 1
    C = np.zeros((N, W), dtype=np.uint64)
    C[:, 0] = 1
    Bx = np.zeros((N, W), dtype=np.uint64)
    Bx[:, 0] = 2  # x * B with B = 1
    R = np.zeros((N, W), dtype=np.uint64)  # bit j holds s[i - j]
    L = np.zeros(N, dtype=np.int64)
    one = np.uint64(1)
    for i in range(M):
        R = _shl1(R)
        R[:, 0] |= blocks[:, i].astype(np.uint64)
        d = (np.bitwise_count(C & R).sum(axis=1) & 1).astype(bool)
        grow = d & (2 * L <= i)
        newC = np.where(d[:, None], C ^ Bx, C)
        Bx = _shl1(np.where(grow[:, None], C, Bx))
        L = np.where(grow, i + 1 - L, L)
        C = newC
    return L


def linear_complexity_test(seq, M: int = 500, alpha: float = 0.01) -> TestResult:
    """Distribution of LFSR lengths of N disjoint M-bit blocks."""
    bits = as_bits(seq)
    require_nonempty(bits)
    n = bits.size
    N = n // M
    if N == 0:
        return TestResult("linear_complexity", (0.0,), False, alpha, {"M": M, "N": 0})
    L = linear_complexities(bits[: N * M].reshape(N, M))
    mu = M / 2.0 + (9 + (-1) ** (M + 1)) / 36.0 - (M / 3.0 + 2 / 9.0) / 2.0**M
    T = (-1) ** M * (L - mu) + 2 / 9.0
    edges = np.array([-2.5, -1.5, -0.5, 0.5, 1.5, 2.5])
    cls = np.searchsorted(edges, T, side="left")
    nu = np.bincount(cls, minlength=7)
    chi2 = chi2_counts(nu, N * _PI)
    p = igamc(3.0, chi2 / 2.0)
    applicable = 500 <= M <= 5000 and N >= 200
    return TestResult(
        "linear_complexity", (p,), applicable, alpha, {"M": M, "N": N, "nu": nu.tolist(), "chi2": chi2}
    )
