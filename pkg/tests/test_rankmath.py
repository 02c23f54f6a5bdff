import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from utopk import (
    CorrelationPresent,
    DomainError,
    UncertainTuple,
    XRelation,
    coefficients,
    hat_p,
    leaf_coefficients,
    rank_score,
    rank_score_dp,
    rank_scores,
)

from conftest import random_relation

# (m, c, upsilon) at alpha = 0.9, printed to three decimals
TABLE2 = {
    1: (0.300, 0.970, 0.300),
    2: (0.400, 0.960, 0.388),
    3: (0.200, 0.980, 0.186),
    4: (0.521, 0.948, 0.475),
    5: (0.300, 0.970, 0.260),
    6: (0.459, 0.954, 0.385),
}


def test_hat_p(traffic, worked):
    assert hat_p(worked, 3) == pytest.approx(0.3)
    assert hat_p(traffic, 4) == pytest.approx(0.4)
    assert hat_p(traffic, 6) == pytest.approx(0.2)
    for tid in (1, 2, 3, 5):
        assert hat_p(traffic, tid) == 0.0


@pytest.mark.parametrize(
    "p, hp, alpha, m, c, tol",
    [
        (0.5, 0.4, 0.9, 0.521, 0.948, 5e-4),
        (0.45, 0.2, 0.9, 0.459, 0.954, 5e-4),
        (0.4, 0.3, 0.8, 0.4255, 0.9149, 5e-5),
    ],
)
def test_coefficients_match_published(p, hp, alpha, m, c, tol):
    lc = coefficients(p, hp, alpha)
    assert lc.m == pytest.approx(m, abs=tol)
    assert lc.c == pytest.approx(c, abs=tol)
    assert lc.hat_p == hp


@given(st.floats(1e-6, 1.0), st.floats(1e-6, 1 - 1e-6))
def test_independent_coefficients_reduce(p, alpha):
    lc = coefficients(p, 0.0, alpha)
    assert lc.m == p
    assert lc.c == 1 - (1 - alpha) * p


@pytest.mark.parametrize("p, hp", [(0.0, 0.0), (1.2, 0.0), (0.5, 1.0), (0.6, 0.5), (0.5, -0.1)])
def test_coefficient_domain(p, hp):
    with pytest.raises(DomainError):
        coefficients(p, hp, 0.5)


def test_table2(traffic):
    coef = leaf_coefficients(traffic, 0.9)
    ups = rank_scores(traffic, 0.9)
    for tid, (m, c, u) in TABLE2.items():
        assert coef[tid].m == pytest.approx(m, abs=1e-3)
        assert coef[tid].c == pytest.approx(c, abs=1e-3)
        assert ups[tid] == pytest.approx(u, abs=1e-3)
        assert rank_score(traffic, 0.9, tid) == ups[tid]


def test_worked_example(worked):
    ups = [rank_score(worked, 0.8, t) for t in (1, 2, 3, 4)]
    assert ups == pytest.approx([0.35, 0.28, 0.37, 0.36], abs=5e-3)


def test_top_tuple_scores_its_probability(traffic):
    assert rank_score(traffic, 0.3, 1) == 0.3


@pytest.mark.parametrize("alpha", [0.0, 1.0, -0.5, 2.0])
def test_alpha_bounds(traffic, alpha):
    with pytest.raises(DomainError):
        rank_scores(traffic, alpha)


def test_dp_small_cases():
    one = XRelation([UncertainTuple(1, 1.0, 0.3, "a")])
    assert rank_score_dp(one, 0.42, 1) == pytest.approx(0.3, rel=1e-15)
    two = XRelation([UncertainTuple(1, 2.0, 0.3, "a"), UncertainTuple(2, 1.0, 0.4, "b")])
    assert rank_score_dp(two, 0.9, 2) == pytest.approx(0.388, rel=1e-12)


def test_dp_rejects_correlation(traffic):
    with pytest.raises(CorrelationPresent):
        rank_score_dp(traffic, 0.9, 1)


@pytest.mark.parametrize("alpha", [0.5, 0.9, 0.99])
def test_dp_agrees_with_closed_form(alpha):
    rng = np.random.default_rng(7)
    for _ in range(1000 // 3 + 1):
        rel = random_relation(rng, int(rng.integers(1, 11)), max_alts=1)
        closed = rank_scores(rel, alpha)
        for t in rel.ordered():
            dp = rank_score_dp(rel, alpha, t.id)
            assert abs(closed[t.id] - dp) <= 1e-12 * closed[t.id]


@settings(max_examples=200)
@given(st.integers(0, 2**32 - 1), st.sampled_from([0.3, 0.5, 0.9, 0.99]))
def test_telescoping_and_bounds(seed, alpha):
    rel = random_relation(np.random.default_rng(seed), 12)
    coef = leaf_coefficients(rel, alpha)
    ups = rank_scores(rel, alpha)
    order = rel.ordered()
    for a, b in zip(order, order[1:]):
        ratio = (ups[b.id] / coef[b.id].m) / (ups[a.id] / coef[a.id].m)
        assert math.isclose(ratio, coef[a.id].c, rel_tol=1e-12)
    for t in order:
        lc = coef[t.id]
        assert 0 < ups[t.id] <= lc.m
        assert lc.m >= t.prob
        assert 0 < lc.c < 1


@settings(max_examples=100)
@given(st.integers(0, 2**32 - 1))
def test_monotone_score_transform_is_invisible(seed):
    rel = random_relation(np.random.default_rng(seed), 10)
    moved = XRelation(
        UncertainTuple(t.id, math.exp(t.score / 10) * 3 + 7, t.prob, t.xtuple) for t in rel.ordered()
    )
    assert rank_scores(rel, 0.7) == rank_scores(moved, 0.7)


def test_exhausted_xtuple_still_leaves_positive_factor():
    # x-tuple "a" always contributes exactly one tuple above id 3
    rel = XRelation([
        UncertainTuple(1, 3.0, 0.6, "a"),
        UncertainTuple(2, 2.0, 0.4, "a"),
        UncertainTuple(3, 1.0, 0.5, "b"),
    ])
    coef = leaf_coefficients(rel, 0.5)
    assert coef[2].c == pytest.approx(0.5 / 0.7)
    assert rank_scores(rel, 0.5)[3] == pytest.approx(0.5 * 0.5)
