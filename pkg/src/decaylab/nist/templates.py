"""Non-overlapping and overlapping template matching tests."""

from __future__ import annotations

import math
from functools import lru_cache
from importlib import resources
from typing import Optional, Sequence

import numpy as np

from ..bitcore import TestResult
from ..special import igamc
from ._common import as_bits, chi2_counts, require_nonempty, window_values


def is_aperiodic(template: str) -> bool:
    """True when no proper prefix of the template equals its suffix.

    Occurrences of such a template can never overlap each other.
    """
    m = len(template)
    return all(template[:k] != template[m - k :] for k in range(1, m))


def aperiodic_templates(m: int) -> list[str]:
    """All aperiodic m-bit templates in lexicographic order."""
    return [t for t in (format(v, f"0{m}b") for v in range(1 << m)) if is_aperiodic(t)]


@lru_cache(maxsize=None)
def load_templates(m: int) -> tuple[str, ...]:
    """Template set shipped with the package (``data/templates<m>.txt``).

    Falls back to enumeration when no data file exists for ``m``.
    """
    try:
        text = resources.files(__package__).joinpath(f"data/templates{m}.txt").read_text()
    except FileNotFoundError:
        return tuple(aperiodic_templates(m))
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(line.replace(" ", ""))
    return tuple(out)


def _count_non_overlapping(block: np.ndarray, template: np.ndarray) -> int:
    m = template.size
    count = 0
    i = 0
    last = block.size - m
    while i <= last:
        if np.array_equal(block[i : i + m], template):
            count += 1
            i += m
        else:
            i += 1
    return count


def non_overlapping_template_test(
    seq,
    templates: Optional[Sequence[str]] = None,
    m: int = 9,
    N: int = 8,
    alpha: float = 0.01,
) -> TestResult:
    """Occurrences of each aperiodic template in N blocks, skipping m bits
    after every hit.

    One chi-square P-value per template is kept in ``detail``. The single
    reported P-value is the smallest of them after a Sidak correction for
    the number of templates, ``1 - (1 - p_min)**K``, so that the test as a
    whole rejects a fair source at rate alpha.
    """
    bits = as_bits(seq)
    require_nonempty(bits)
    if templates is None:
        templates = load_templates(m)
    templates = [str(t) for t in templates]
    if not templates:
        raise ValueError("no templates given")
    m = len(templates[0])
    if any(len(t) != m for t in templates):
        raise ValueError("templates must share one length")
    n = bits.size
    M = n // N
    if M < m:
        raise ValueError(f"block length {M} shorter than template length {m}")
    mu = (M - m + 1) / 2.0**m
    var = M * (1 / 2.0**m - (2 * m - 1) / 2.0 ** (2 * m))

    blocks = bits[: N * M].reshape(N, M)
    counts = np.empty((len(templates), N), dtype=np.int64)
    if all(is_aperiodic(t) for t in templates):
        # hits of an aperiodic template cannot overlap, so every window hit counts
        w = np.stack([window_values(b, m, wrap=False) for b in blocks])
        offs = (np.arange(N) << m)[:, None]
        table = np.bincount((w + offs).ravel(), minlength=N << m).reshape(N, 1 << m)
        codes = [int(t, 2) for t in templates]
        counts[:] = table[:, codes].T
    else:
        for k, t in enumerate(templates):
            tarr = np.frombuffer(t.encode(), dtype=np.uint8) - ord("0")
            counts[k] = [_count_non_overlapping(b, tarr) for b in blocks]

    chi2 = np.sum((counts - mu) ** 2, axis=1) / var
    per_template = [igamc(N / 2.0, float(c) / 2.0) for c in chi2]
    p_min = min(per_template)
    K = len(per_template)
    p_adj = -math.expm1(K * math.log1p(-p_min)) if p_min < 1 else 1.0
    applicable = n >= 100 and mu >= 5 and N <= 100
    return TestResult(
        "non_overlapping_template",
        (p_adj,),
        applicable,
        alpha,
        {
            "m": m,
            "N": N,
            "M": M,
            "p_min": p_min,
            "n_templates": K,
            "n_templates_below_alpha": int(sum(p < alpha for p in per_template)),
            "per_template": dict(zip(templates, per_template)),
        },
    )


@lru_cache(maxsize=None)
def overlapping_class_probs(m: int, M: int, K: int) -> tuple[float, ...]:
    """Exact distribution of overlapping all-ones m-runs in M fair bits.

    Classes are 0, 1, ..., K-1 occurrences and ``>= K``. Computed by a
    dynamic program over (trailing run of ones, occurrences so far).
    """
    state = np.zeros((m + 1, K + 1))
    state[0, 0] = 1.0
    for _ in range(M):
        nxt = np.zeros_like(state)
        # bit 0 resets the run
        nxt[0, :] += 0.5 * state.sum(axis=0)
        # bit 1 extends it; reaching length m records a hit (run stays at m)
        nxt[1:m, :] += 0.5 * state[0 : m - 1, :]
        hit = 0.5 * (state[m - 1, :] + state[m, :])
        nxt[m, 1:] += hit[:-1]
        nxt[m, K] += hit[K]
        state = nxt
    return tuple(float(v) for v in state.sum(axis=0))


def overlapping_template_test(
    seq, m: int = 9, M: int = 1032, K: int = 5, alpha: float = 0.01
) -> TestResult:
    """Overlapping occurrences of the all-ones m-bit template per M-bit block."""
    bits = as_bits(seq)
    require_nonempty(bits)
    n = bits.size
    N = n // M
    if N == 0:
        return TestResult("overlapping_template", (0.0,), False, alpha, {"N": 0})
    target = (1 << m) - 1
    w = window_values(bits[: N * M], m, wrap=False)
    # windows that straddle two blocks are discarded
    pos = np.arange(w.size) % M
    hits = (w == target) & (pos <= M - m)
    per_block = np.bincount(np.arange(w.size)[hits] // M, minlength=N)
    nu = np.bincount(np.minimum(per_block, K), minlength=K + 1)
    pi = np.array(overlapping_class_probs(m, M, K))
    chi2 = chi2_counts(nu, N * pi)
    p = igamc(K / 2.0, chi2 / 2.0)
    applicable = N * pi.min() >= 5
    return TestResult(
        "overlapping_template",
        (p,),
        applicable,
        alpha,
        {"m": m, "M": M, "N": N, "nu": nu.tolist(), "chi2": chi2},
    )
