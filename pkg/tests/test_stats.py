import itertools
import math

import numpy as np
import pytest

from fenopt.errors import DegenerateSamples
from fenopt.stats import (bonferroni, wilcoxon_rank_sum,
                          wilcoxon_signed_rank, _midranks)


def oracle_rank_sum_p(a, b):
    """Exhaustive enumeration over all rank assignments (midrank ties)."""
    pooled = np.concatenate([a, b])
    ranks = _midranks(pooled)
    n = len(a)
    observed = ranks[:n].sum()
    sums = [sum(ranks[list(idx)]) for idx in
            itertools.combinations(range(len(pooled)), n)]
    le = sum(1 for s in sums if s <= observed + 1e-9)
    ge = sum(1 for s in sums if s >= observed - 1e-9)
    return min(1.0, 2.0 * min(le, ge) / len(sums))


def test_separated_small_samples():
    p = wilcoxon_rank_sum([1, 2, 3, 4, 5], [6, 7, 8, 9, 10])
    assert p == pytest.approx(2 / 252)


def test_separated_fifteen_each():
    a = list(range(1, 16))
    b = list(range(16, 31))
    p = wilcoxon_rank_sum(a, b)
    assert p == pytest.approx(2 / math.comb(30, 15), rel=1e-12)


def test_identical_samples_p_one():
    a = [1.0, 2.0, 3.0, 4.0, 5.0]
    assert wilcoxon_rank_sum(a, a) == pytest.approx(1.0, abs=1e-9)


def test_degenerate_samples():
    with pytest.raises(DegenerateSamples):
        wilcoxon_rank_sum([3, 3, 3], [3, 3, 3])


def test_exact_matches_enumeration_oracle():
    rng = np.random.default_rng(31)
    for _ in range(25):
        n = int(rng.integers(2, 8))
        m = int(rng.integers(2, 8))
        a = rng.integers(0, 6, n).astype(float)   # plenty of ties
        b = rng.integers(0, 6, m).astype(float)
        if np.all(np.concatenate([a, b]) == a[0] if len(a) else False):
            continue
        pooled = np.concatenate([a, b])
        if np.all(pooled == pooled[0]):
            continue
        assert wilcoxon_rank_sum(a, b) == pytest.approx(
            oracle_rank_sum_p(a, b), rel=1e-12), (a, b)


def test_normal_approximation_sane():
    rng = np.random.default_rng(32)
    a = rng.normal(0.0, 1.0, 40)
    b = rng.normal(3.0, 1.0, 40)
    p = wilcoxon_rank_sum(a, b)
    assert p < 1e-6
    c = rng.normal(0.0, 1.0, 40)
    p_same = wilcoxon_rank_sum(a, c)
    assert p_same > 0.01


def test_signed_rank_fully_one_sided_sixteen_pairs():
    a = np.arange(16, dtype=float)
    b = a + 1.0
    p = wilcoxon_signed_rank(a, b)
    assert p == pytest.approx(2 / 2 ** 16, rel=1e-12)


def test_signed_rank_no_difference():
    a = np.arange(10, dtype=float)
    assert wilcoxon_signed_rank(a, a) == 1.0


def test_bonferroni_threshold():
    flags = bonferroni([0.003, 0.004, 0.5], alpha=0.01)
    assert flags == [True, False, False]
    assert bonferroni([0.009], alpha=0.01) == [True]
    with pytest.raises(ValueError):
        bonferroni([])
