"""Approximate entropy and serial tests (overlapping m-bit patterns, with
wrap-around)."""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from ..bitcore import TestResult
from ..special import igamc
from ._common import as_bits, require_nonempty, window_values


def default_approx_entropy_m(n: int) -> int:
    return int(min(10, max(2, math.floor(math.log2(n)) - 6)))


def default_serial_m(n: int) -> int:
    return int(min(16, max(2, math.floor(math.log2(n)) - 3)))


def _counts_from_windows(v: np.ndarray, m: int) -> np.ndarray:
    return np.bincount(v, minlength=1 << m)


def _phi(counts: np.ndarray, n: int) -> float:
    c = counts[counts > 0] / n
    return float(np.sum(c * np.log(c)))


def approximate_entropy_test(seq, m: Optional[int] = None, alpha: float = 0.01) -> TestResult:
    """Compare frequencies of overlapping m- and (m+1)-bit patterns.

    ApEn = phi(m) - phi(m+1); chi2 = 2n (ln 2 - ApEn); P = igamc(2^(m-1), chi2/2).
    """
    bits = as_bits(seq)
    require_nonempty(bits)
    n = bits.size
    if m is None:
        m = default_approx_entropy_m(n)
    if m < 1:
        raise ValueError("m must be at least 1")
    v = window_values(bits, m + 1, wrap=True)
    phi_m1 = _phi(_counts_from_windows(v, m + 1), n)
    phi_m = _phi(_counts_from_windows(v >> 1, m), n)
    apen = phi_m - phi_m1
    chi2 = 2.0 * n * (math.log(2) - apen)
    p = igamc(2.0 ** (m - 1), max(chi2, 0.0) / 2.0)
    applicable = m < math.floor(math.log2(n)) - 5
    return TestResult(
        "approximate_entropy", (p,), applicable, alpha, {"m": m, "ApEn": apen, "chi2": chi2}
    )


def _psi2(counts: np.ndarray, n: int, m: int) -> float:
    if m <= 0:
        return 0.0
    return (2.0**m / n) * float(np.sum(counts.astype(float) ** 2)) - n


def serial_test(seq, m: Optional[int] = None, alpha: float = 0.01) -> TestResult:
    """Uniformity of overlapping m-bit patterns; two P-values (first and
    second differences of psi^2)."""
    bits = as_bits(seq)
    require_nonempty(bits)
    n = bits.size
    if m is None:
        m = default_serial_m(n)
    if m < 2:
        raise ValueError("m must be at least 2")
    v = window_values(bits, m, wrap=True)
    psi = []
    for k in (m, m - 1, m - 2):
        psi.append(_psi2(_counts_from_windows(v >> (m - k), k), n, k) if k > 0 else 0.0)
    d1 = psi[0] - psi[1]
    d2 = psi[0] - 2 * psi[1] + psi[2]
    p1 = igamc(2.0 ** (m - 2), max(d1, 0.0) / 2.0)
    p2 = igamc(2.0 ** (m - 3), max(d2, 0.0) / 2.0)
    applicable = m < math.floor(math.log2(n)) - 2
    return TestResult(
        "serial", (p1, p2), applicable, alpha, {"m": m, "del_psi2": d1, "del2_psi2": d2}
    )
