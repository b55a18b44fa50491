"""Nonparametric comparison statistics.

Wilcoxon rank-sum (Mann-Whitney) and signed-rank tests with midrank tie
handling.  For small samples the null distribution is enumerated exactly
(integer dynamic programming over doubled midranks, so ties stay exact);
larger samples use the normal approximation with tie correction and
continuity correction.  All p-values are two-sided.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DegenerateSamples

EXACT_RANKSUM_LIMIT = 30   # pooled size; DP cost is trivial up to here
EXACT_SIGNEDRANK_LIMIT = 25


def _midranks(values) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values))
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def _normal_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def _two_sided_from_distribution(counts: dict, total: int, observed: int) -> float:
    le = sum(c for s, c in counts.items() if s <= observed)
    ge = sum(c for s, c in counts.items() if s >= observed)
    p = 2.0 * min(le, ge) / total
    return min(1.0, p)


def wilcoxon_rank_sum(sample_a, sample_b) -> float:
    """Two-sided rank-sum p-value for independent samples."""
    a = np.asarray(sample_a, dtype=float)
    b = np.asarray(sample_b, dtype=float)
    n, m = len(a), len(b)
    if n < 1 or m < 1:
        raise DegenerateSamples("both samples need at least one value")
    pooled = np.concatenate([a, b])
    if np.all(pooled == pooled[0]):
        raise DegenerateSamples("all values identical across both samples")

    ranks = _midranks(pooled)
    w_a = float(ranks[:n].sum())
    big_n = n + m

    if big_n <= EXACT_RANKSUM_LIMIT:
        doubled = np.rint(2.0 * ranks).astype(int)
        observed = int(round(2.0 * w_a))
        # counts[j][s] = subsets of size j with doubled-rank sum s.
        counts = [dict() for _ in range(n + 1)]
        counts[0][0] = 1
        for r in doubled:
            for j in range(min(n, big_n) - 1, -1, -1):
                if not counts[j]:
                    continue
                target = counts[j + 1]
                for s, c in counts[j].items():
                    target[s + r] = target.get(s + r, 0) + c
        total = math.comb(big_n, n)
        return _two_sided_from_distribution(counts[n], total, observed)

    mu = n * (big_n + 1) / 2.0
    _, tie_counts = np.unique(pooled, return_counts=True)
    tie_term = float(np.sum(tie_counts ** 3 - tie_counts))
    var = n * m / 12.0 * ((big_n + 1) - tie_term / (big_n * (big_n - 1)))
    if var <= 0:
        raise DegenerateSamples("zero variance under ties")
    shift = 0.5 if w_a > mu else (-0.5 if w_a < mu else 0.0)
    z = (w_a - mu - shift) / math.sqrt(var)
    return min(1.0, 2.0 * _normal_sf(abs(z)))


def wilcoxon_signed_rank(sample_a, sample_b) -> float:
    """Two-sided signed-rank p-value for paired samples (zeros dropped)."""
    a = np.asarray(sample_a, dtype=float)
    b = np.asarray(sample_b, dtype=float)
    if len(a) != len(b):
        raise DegenerateSamples("paired samples must have equal length")
    diff = a - b
    diff = diff[diff != 0.0]
    n = len(diff)
    if n == 0:
        return 1.0

    ranks = _midranks(np.abs(diff))
    w_plus = float(ranks[diff > 0].sum())

    if n <= EXACT_SIGNEDRANK_LIMIT:
        doubled = np.rint(2.0 * ranks).astype(int)
        observed = int(round(2.0 * w_plus))
        counts = {0: 1}
        for r in doubled:
            nxt = dict(counts)
            for s, c in counts.items():
                nxt[s + r] = nxt.get(s + r, 0) + c
            counts = nxt
        return _two_sided_from_distribution(counts, 2 ** n, observed)

    mu = n * (n + 1) / 4.0
    _, tie_counts = np.unique(np.abs(diff), return_counts=True)
    var = (n * (n + 1) * (2 * n + 1)
           - float(np.sum(tie_counts ** 3 - tie_counts)) / 2.0) / 24.0
    shift = 0.5 if w_plus > mu else (-0.5 if w_plus < mu else 0.0)
    z = (w_plus - mu - shift) / math.sqrt(var)
    return min(1.0, 2.0 * _normal_sf(abs(z)))


def bonferroni(p_values, alpha: float = 0.01) -> list:
    """Family-wise significance flags: p < alpha / m."""
    p_values = list(p_values)
    if not p_values:
        raise ValueError("need at least one p-value")
    threshold = alpha / len(p_values)
    return [p < threshold for p in p_values]
