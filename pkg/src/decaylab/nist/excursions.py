"""Random excursions and random excursions variant tests."""

from __future__ import annotations

import math

import numpy as np

from ..bitcore import TestResult
from ..special import erfc, igamc
from ._common import as_bits, chi2_counts, require_nonempty

EXCURSION_STATES = (-4, -3, -2, -1, 1, 2, 3, 4)
VARIANT_STATES = tuple(x for x in range(-9, 10) if x != 0)
MIN_CYCLES = 500


def excursion_probs(x: int) -> np.ndarray:
    """P(state x is visited exactly k times in a cycle), k = 0..4 and >= 5."""
    a = 1.0 / (2 * abs(x))
    probs = [1 - a]
    probs += [(1.0 / (4 * x * x)) * (1 - a) ** (k - 1) for k in range(1, 5)]
    probs.append(a * (1 - a) ** 4)
    return np.array(probs)


def _walk(bits: np.ndarray) -> tuple[np.ndarray, int]:
    s = np.cumsum(2 * bits.astype(np.int64) - 1)
    J = int(np.count_nonzero(s == 0)) + (1 if s[-1] != 0 else 0)
    return s, J


def random_excursions_test(seq, alpha: float = 0.01) -> TestResult:
    """Visit counts to states -4..4 per zero-to-zero cycle of the random walk.

    Eight P-values, in state order -4, -3, -2, -1, 1, 2, 3, 4. Not
    applicable with fewer than 500 cycles.
    """
    bits = as_bits(seq)
    require_nonempty(bits)
    s, J = _walk(bits)
    if J == 0:
        return TestResult("random_excursions", (0.0,) * 8, False, alpha, {"J": 0})
    # step k belongs to the cycle counted by zeros strictly before it
    zero = s == 0
    cycle = np.concatenate(([0], np.cumsum(zero)[:-1]))
    inrange = (np.abs(s) <= 4) & ~zero
    code = cycle[inrange] * 9 + (s[inrange] + 4)
    visits = np.bincount(code, minlength=J * 9).reshape(J, 9)
    p_values = []
    chi2s = {}
    for x in EXCURSION_STATES:
        nu = np.bincount(np.minimum(visits[:, x + 4], 5), minlength=6)
        chi2 = chi2_counts(nu, J * excursion_probs(x))
        chi2s[x] = chi2
        p_values.append(igamc(2.5, chi2 / 2.0))
    return TestResult(
        "random_excursions",
        tuple(p_values),
        J >= MIN_CYCLES,
        alpha,
        {"J": J, "states": list(EXCURSION_STATES), "chi2": [chi2s[x] for x in EXCURSION_STATES]},
    )


def random_excursions_variant_test(seq, alpha: float = 0.01) -> TestResult:
    """Total visits to states -9..9 against the cycle count; 18 P-values."""
    bits = as_bits(seq)
    require_nonempty(bits)
    s, J = _walk(bits)
    if J == 0:
        return TestResult("random_excursions_variant", (0.0,) * 18, False, alpha, {"J": 0})
    inrange = np.abs(s) <= 9
    xi = np.bincount(s[inrange] + 9, minlength=19)
    p_values = [
        erfc(abs(int(xi[x + 9]) - J) / math.sqrt(2.0 * J * (4 * abs(x) - 2)))
        for x in VARIANT_STATES
    ]
    return TestResult(
        "random_excursions_variant",
        tuple(p_values),
        J >= MIN_CYCLES,
        alpha,
        {"J": J, "states": list(VARIANT_STATES), "visits": [int(xi[x + 9]) for x in VARIANT_STATES]},
    )
