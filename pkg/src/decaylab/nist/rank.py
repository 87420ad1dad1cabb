"""Binary matrix rank test."""

from __future__ import annotations

import numpy as np

from ..bitcore import TestResult
from ..special import igamc
from ._common import as_bits, chi2_counts, require_nonempty


def rank_probability(r: int, M: int, Q: int) -> float:
    """Probability that a random M x Q matrix over GF(2) has rank r."""
    if r < 0 or r > min(M, Q):
        return 0.0
    log2p = r * (Q + M - r) - M * Q
    prod = 1.0
    for i in range(r):
        prod *= (1 - 2.0 ** (i - Q)) * (1 - 2.0 ** (i - M)) / (1 - 2.0 ** (i - r))
    return 2.0**log2p * prod


def gf2_ranks(rows: np.ndarray, Q: int) -> np.ndarray:
    """Ranks of a stack of GF(2) matrices.

    ``rows`` has shape (N, M); each entry packs one Q-bit row (Q <= 64),
    first column in the most significant position.
    """
    rows = rows.astype(np.uint64).copy()
    N, M = rows.shape
    used = np.zeros((N, M), dtype=bool)
    rank = np.zeros(N, dtype=np.int64)
    idx = np.arange(N)
    row_ids = np.arange(M)
    for c in range(Q):
        bit = np.uint64(1 << (Q - 1 - c))
        has = (rows & bit) != 0
        cand = has & ~used
        found = cand.any(axis=1)
        piv = np.argmax(cand, axis=1)
        pivrow = rows[idx, piv]
        elim = has & (row_ids[None, :] != piv[:, None]) & found[:, None]
        rows ^= np.where(elim, pivrow[:, None], np.uint64(0))
        used[idx[found], piv[found]] = True
        rank += found
    return rank


def _pack_rows(bits: np.ndarray, N: int, M: int, Q: int) -> np.ndarray:
    mat = bits[: N * M * Q].reshape(N, M, Q).astype(np.uint64)
    weights = np.uint64(1) << np.arange(Q - 1, -1, -1, dtype=np.uint64)
    return (mat * weights).sum(axis=2, dtype=np.uint64)


def binary_matrix_rank_test(seq, M: int = 32, Q: int = 32, alpha: float = 0.01) -> TestResult:
    """Rank deficiency of disjoint M x Q sub-matrices.

    Ranks are classed as full, full - 1 and lower; chi2 with 2 degrees of
    freedom, P = exp(-chi2 / 2).
    """
    bits = as_bits(seq)
    require_nonempty(bits)
    if not 1 <= Q <= 64 or M < 2:
        raise ValueError("matrix shape must satisfy M >= 2 and 1 <= Q <= 64")
    n = bits.size
    N = n // (M * Q)
    full = min(M, Q)
    if N == 0:
        return TestResult("rank", (0.0,), False, alpha, {"N": 0})
    ranks = gf2_ranks(_pack_rows(bits, N, M, Q), Q)
    f_full = int(np.sum(ranks == full))
    f_m1 = int(np.sum(ranks == full - 1))
    observed = np.array([f_full, f_m1, N - f_full - f_m1])
    p_full = rank_probability(full, M, Q)
    p_m1 = rank_probability(full - 1, M, Q)
    probs = np.array([p_full, p_m1, 1.0 - p_full - p_m1])
    chi2 = chi2_counts(observed, N * probs)
    p = igamc(1.0, chi2 / 2.0)
    # recommended: at least 38 matrices
    applicable = N >= 38
    return TestResult(
        "rank", (p,), applicable, alpha, {"N": N, "counts": observed.tolist(), "chi2": chi2}
    )

