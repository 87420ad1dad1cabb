"""Frequency-type tests: block frequency and cumulative sums."""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from ..bitcore import TestResult
from ..special import igamc, normal_cdf
from ._common import as_bits, require_nonempty


def default_block_length(n: int) -> int:
    """Smallest block length meeting M >= 20 and M > n/100."""
    return max(20, n // 100 + 1)


def block_frequency_test(seq, M: Optional[int] = None, alpha: float = 0.01) -> TestResult:
    """Proportion of ones within non-overlapping M-bit blocks.

    chi2 = 4 M sum_j (pi_j - 1/2)^2, P = igamc(N/2, chi2/2). The trailing
    partial block is discarded.
    """
    bits = as_bits(seq)
    require_nonempty(bits)
    n = bits.size
    if M is None:
        M = default_block_length(n)
    if M < 1:
        raise ValueError("block length must be positive")
    if M > n:
        raise ValueError(f"block length {M} exceeds sequence length {n}")
    N = n // M
    pi = bits[: N * M].reshape(N, M).sum(axis=1) / M
    chi2 = 4.0 * M * float(np.sum((pi - 0.5) ** 2))
    p = igamc(N / 2.0, chi2 / 2.0)
    applicable = n >= 100 and M >= 20 and M > 0.01 * n and N < 100
    return TestResult(
        "block_frequency", (p,), applicable, alpha, {"M": M, "N": N, "chi2": chi2}
    )


def _cusum_p_value(n: int, z: int) -> float:
    sqn = math.sqrt(n)
    # int() truncates toward zero, matching the reference summation limits
    k = np.arange(int((-n / z + 1) / 4), int((n / z - 1) / 4) + 1)
    s1 = np.sum(normal_cdf((4 * k + 1) * z / sqn) - normal_cdf((4 * k - 1) * z / sqn))
    k = np.arange(int((-n / z - 3) / 4), int((n / z - 1) / 4) + 1)
    s2 = np.sum(normal_cdf((4 * k + 3) * z / sqn) - normal_cdf((4 * k + 1) * z / sqn))
    return float(1.0 - s1 + s2)


def cumulative_sums_test(seq, alpha: float = 0.01) -> TestResult:
    """Maximal excursion of the +/-1 random walk, forward and backward.

    Returns two P-values, ``(forward, backward)``.
    """
    bits = as_bits(seq)
    require_nonempty(bits)
    n = bits.size
    x = 2 * bits.astype(np.int64) - 1
    z_fwd = int(np.max(np.abs(np.cumsum(x))))
    z_bwd = int(np.max(np.abs(np.cumsum(x[::-1]))))
    p_fwd = _cusum_p_value(n, z_fwd)
    p_bwd = _cusum_p_value(n, z_bwd)
    return TestResult(
        "cumulative_sums",
        (p_fwd, p_bwd),
        n >= 100,
        alpha,
        {"z_forward": z_fwd, "z_backward": z_bwd},
    )
