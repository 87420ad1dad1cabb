"""Special functions used for P-values: erfc and the regularized upper
incomplete gamma function Q(a, x).

igamc follows the classic split: power series for P(a, x) when
x < a + 1, modified Lentz continued fraction for Q(a, x) otherwise.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special as _sp

_EPS = 1e-16
_TINY = 1e-300


def erfc(x: float) -> float:
    """Complementary error function (C library implementation)."""
    return math.erfc(x)


def erfc_array(x) -> np.ndarray:
    return _sp.erfc(np.asarray(x, dtype=float))


def normal_cdf(x) -> np.ndarray:
    """Standard normal CDF, vectorised, via 0.5 * erfc(-x / sqrt 2)."""
    return 0.5 * erfc_array(-np.asarray(x, dtype=float) / math.sqrt(2.0))


def _max_iter(a: float, x: float) -> int:
    # both expansions need O(sqrt(a)) terms near the transition x ~ a
    return 500 + int(20 * math.sqrt(max(a, x)))


def _prefactor(a: float, x: float) -> float:
    return math.exp(a * math.log(x) - x - math.lgamma(a))


def _lower_series(a: float, x: float) -> float:
    """Regularized lower incomplete gamma P(a, x) by power series."""
    ap = a
    term = 1.0 / a
    total = term
    for _ in range(_max_iter(a, x)):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    else:
        raise ArithmeticError(f"igamc series did not converge (a={a}, x={x})")
    return total * _prefactor(a, x)


def _upper_cf(a: float, x: float) -> float:
    """Q(a, x) by continued fraction, modified Lentz method."""
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _max_iter(a, x) + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    else:
        raise ArithmeticError(f"igamc continued fraction did not converge (a={a}, x={x})")
    return h * _prefactor(a, x)


def igamc(a: float, x: float) -> float:
    """Regularized upper incomplete gamma function Q(a, x).

    Parameters
    ----------
    a : float
        Shape, must be positive.
    x : float
        Non-negative argument.

    Returns
    -------
    float
        Q(a, x) = Gamma(a, x) / Gamma(a), in [0, 1].
    """
    if not a > 0:
        raise ValueError(f"igamc requires a > 0, got {a}")
    if x < 0:
        raise ValueError(f"igamc requires x >= 0, got {x}")
    if x == 0:
        return 1.0
    if math.isinf(x):
        return 0.0
    if x < a + 1.0:
        q = 1.0 - _lower_series(a, x)
    else:
        q = _upper_cf(a, x)
    return min(1.0, max(0.0, q))


def igam(a: float, x: float) -> float:
    """Regularized lower incomplete gamma function P(a, x) = 1 - Q(a, x)."""
    if not a > 0:
        raise ValueError(f"igam requires a > 0, got {a}")
    if x < 0:
        raise ValueError(f"igam requires x >= 0, got {x}")
    if x == 0:
        return 0.0
    if x < a + 1.0:
        return min(1.0, _lower_series(a, x))
    return 1.0 - igamc(a, x)
