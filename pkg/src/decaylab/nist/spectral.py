"""Discrete Fourier transform (spectral) test."""

from __future__ import annotations

import math

import numpy as np

from ..bitcore import TestResult
from ..special import erfc
from ._common import as_bits, require_nonempty


def dft_test(seq, alpha: float = 0.01) -> TestResult:
    """Fraction of half-spectrum peaks below the 95 % threshold.

    Uses the corrected threshold ``sqrt(log(1/0.05) n)`` and the first
    ``n // 2`` DFT moduli.
    """
    bits = as_bits(seq)
    require_nonempty(bits)
    n = bits.size
    x = 2.0 * bits - 1.0
    mod = np.abs(np.fft.fft(x)[: n // 2])
    threshold = math.sqrt(math.log(1 / 0.05) * n)
    n0 = 0.95 * n / 2.0
    n1 = int(np.count_nonzero(mod < threshold))
    d = (n1 - n0) / math.sqrt(n * 0.95 * 0.05 / 4.0)
    p = erfc(abs(d) / math.sqrt(2.0))
    return TestResult("dft", (p,), n >= 1000, alpha, {"N0": n0, "N1": n1, "d": d})
