"""Runs test and longest-run-of-ones test."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from ..bitcore import TestResult
from ..special import erfc, igamc
from ._common import as_bits, chi2_counts, require_nonempty


def runs_test(seq, alpha: float = 0.01) -> TestResult:
    """Total number of runs of identical bits.

    Not applicable (P reported as 0) when the ones proportion fails the
    frequency prerequisite ``|pi - 1/2| < 2/sqrt(n)``.
    """
    bits = as_bits(seq)
    require_nonempty(bits)
    n = bits.size
    pi = int(bits.sum()) / n
    if abs(pi - 0.5) >= 2.0 / math.sqrt(n):
        return TestResult("runs", (0.0,), False, alpha, {"pi": pi, "prerequisite": False})
    v_obs = 1 + int(np.count_nonzero(bits[1:] != bits[:-1]))
    num = abs(v_obs - 2.0 * n * pi * (1 - pi))
    den = 2.0 * math.sqrt(2.0 * n) * pi * (1 - pi)
    p = erfc(num / den)
    return TestResult("runs", (p,), n >= 100, alpha, {"pi": pi, "V_n": v_obs})


# block length -> class bounds (b_0, ..., b_K-1); classes are <= b_0, each
# intermediate value, and >= b_K-1 + 1
_LONGEST_RUN_LAYOUT = {
    8: (1, 2, 3),
    128: (4, 5, 6, 7, 8),
    10_000: (10, 11, 12, 13, 14, 15),
}


def longest_run_block_length(n: int) -> int:
    if n < 6272:
        return 8
    if n < 750_000:
        return 128
    return 10_000


@lru_cache(maxsize=None)
def prob_longest_run_at_most(M: int, v: int) -> float:
    """Exact P(longest run of ones in M fair bits <= v), by dynamic programming."""
    if v < 0:
        return 0.0
    # state: length of the current trailing run of ones (0..v)
    state = np.zeros(v + 1)
    state[0] = 1.0
    for _ in range(M):
        nxt = np.empty_like(state)
        nxt[0] = 0.5 * state.sum()
        nxt[1:] = 0.5 * state[:-1]
        state = nxt
    return float(state.sum())


def longest_run_class_probs(M: int) -> np.ndarray:
    bounds = _LONGEST_RUN_LAYOUT[M]
    cdf = [prob_longest_run_at_most(M, v) for v in bounds]
    probs = [cdf[0]] + [cdf[i] - cdf[i - 1] for i in range(1, len(cdf))] + [1.0 - cdf[-1]]
    return np.array(probs)


def _longest_runs(blocks: np.ndarray) -> np.ndarray:
    """Longest run of ones in each row of a 0/1 matrix."""
    N, M = blocks.shape
    padded = np.zeros((N, M + 2), dtype=np.int8)
    padded[:, 1:-1] = blocks
    d = np.diff(padded, axis=1)
    longest = np.zeros(N, dtype=np.int64)
    rows_s, cols_s = np.nonzero(d == 1)
    _, cols_e = np.nonzero(d == -1)
    # starts and ends pair up in row-major order
    np.maximum.at(longest, rows_s, cols_e - cols_s)
    return longest


def longest_run_test(seq, alpha: float = 0.01) -> TestResult:
    """Longest run of ones within M-bit blocks versus its exact distribution."""
    bits = as_bits(seq)
    require_nonempty(bits)
    n = bits.size
    M = longest_run_block_length(n)
    N = n // M
    if N == 0:
        return TestResult("longest_run", (0.0,), False, alpha, {"M": M, "N": 0})
    bounds = _LONGEST_RUN_LAYOUT[M]
    longest = _longest_runs(bits[: N * M].reshape(N, M))
    cls = np.searchsorted(bounds, longest)
    nu = np.bincount(cls, minlength=len(bounds) + 1)
    pi = longest_run_class_probs(M)
    chi2 = chi2_counts(nu, N * pi)
    K = len(bounds)
    p = igamc(K / 2.0, chi2 / 2.0)
    return TestResult(
        "longest_run", (p,), n >= 128, alpha, {"M": M, "N": N, "nu": nu.tolist(), "chi2": chi2}
    )
