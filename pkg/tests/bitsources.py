"""Reproducible bit strings for known-answer tests.

``e:N`` and ``pi:N`` are the first N bits of the binary expansion of the
constant (integer part included); ``prng:SEED:N`` draws N fair bits from
numpy's PCG64. Anything else is taken as a literal bit string.
"""

from __future__ import annotations

from functools import lru_cache

import mpmath
import numpy as np


@lru_cache(maxsize=None)
def constant_bits(name: str, n: int) -> str:
    with mpmath.workprec(n + 64):
        value = {"e": mpmath.e, "pi": mpmath.pi}[name]
        v = int(mpmath.floor(mpmath.ldexp(+value, n - 2)))
    return bin(v)[2:][:n]


@lru_cache(maxsize=None)
def prng_bits(seed: int, n: int) -> str:
    bits = np.random.default_rng(seed).integers(0, 2, size=n)
    return "".join("01"[b] for b in bits)


def resolve(spec: str) -> str:
    spec = spec.strip()
    head, _, rest = spec.partition(":")
    if head in ("e", "pi"):
        return constant_bits(head, int(rest))
    if head == "prng":
        seed, n = rest.split(":")
        return prng_bits(int(seed), int(n))
    return "".join(c for c in spec if c in "01")
