"""Closed-form rank-scores for the exponential parameterized ranking function.

For a tuple ``t_i`` in score order the rank-score is

    upsilon(t_i) = sum_r alpha**(r-1) * Pr(t_i ranked r)
                 = m_i * prod_{j<i} c_j

with per-tuple coefficients that depend only on the tuple's own x-tuple:

    m_i = p_i / (1 - (1-alpha) * hat_p_i)
    c_i = (1 - (1-alpha) * (hat_p_i + p_i)) / (1 - (1-alpha) * hat_p_i)

where ``hat_p_i`` is the probability mass of the higher-scored alternatives
sharing t_i's x-tuple. Products are taken directly in double precision;
for tiny alpha and very large relations deep rank-scores can underflow to
zero, which only affects tuples that are nowhere near the top.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .model import XRelation

DEFAULT_ALPHA = 1.0 - 0.9**50


class DomainError(ValueError):
    pass


class CorrelationPresent(ValueError):
    """The dynamic-programming path only handles independent tuples."""


@dataclass(frozen=True)
class LeafCoefficients:
    m: float
    c: float
    hat_p: float


def check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not (0.0 < alpha < 1.0):
        raise DomainError(f"alpha must lie strictly between 0 and 1, got {alpha!r}")
    return alpha


def hat_p(rel: XRelation, tid: int) -> float:
    """Probability mass of the alternatives of ``tid`` that outrank it."""
    t = rel.get(tid)
    total = 0.0
    for alt in rel.alternatives(t.xtuple):
        if alt.key >= t.key:
            break
        total += alt.prob
    return total


def coefficients(p: float, hat_p: float, alpha: float) -> LeafCoefficients:
    if not (0.0 < p <= 1.0):
        raise DomainError(f"p must lie in (0, 1], got {p!r}")
    if not (0.0 <= hat_p < 1.0):
        raise DomainError(f"hat_p must lie in [0, 1), got {hat_p!r}")
    if p + hat_p > 1.0 + 1e-12:
        raise DomainError(f"p + hat_p = {p + hat_p!r} exceeds 1")
    q = 1.0 - alpha
    denom = 1.0 - q * hat_p
    return LeafCoefficients(p / denom, (1.0 - q * (hat_p + p)) / denom, hat_p)


def leaf_coefficients(rel: XRelation, alpha: float) -> dict[int, LeafCoefficients]:
    """Coefficients for every tuple in one pass over the score order."""
    alpha = check_alpha(alpha)
    seen: dict[object, float] = {}
    out = {}
    for t in rel.ordered():
        hp = seen.get(t.xtuple, 0.0)
        out[t.id] = coefficients(t.prob, hp, alpha)
        seen[t.xtuple] = hp + t.prob
    return out


def rank_scores(rel: XRelation, alpha: float) -> dict[int, float]:
    """Rank-score of every tuple, computed left to right in O(N)."""
    coef = leaf_coefficients(rel, alpha)
    out = {}
    prefix = 1.0
    for t in rel.ordered():
        lc = coef[t.id]
        out[t.id] = lc.m * prefix
        prefix *= lc.c
    return out


def rank_score(rel: XRelation, alpha: float, tid: int) -> float:
    rel.get(tid)
    return rank_scores(rel, alpha)[tid]


def _dp_upsilon(probs: Sequence[float], alpha: float) -> float:
    # S[r] = Pr(exactly r of the tuples seen so far are present)
    *prefix, p_last = probs
    S = [1.0]
    for p in prefix:
        nxt = [0.0] * (len(S) + 1)
        for r, s in enumerate(S):
            nxt[r] += (1.0 - p) * s
            nxt[r + 1] += p * s
        S = nxt
    total = 0.0
    weight = 1.0
    for s in S:
        total += weight * p_last * s
        weight *= alpha
    return total


def rank_score_dp(rel: XRelation, alpha: float, tid: int) -> float:
    """Rank-score of ``tid`` via the rank-distribution dynamic program.

    Independent of the closed form; valid only when every x-tuple is a
    singleton.
    """
    alpha = check_alpha(alpha)
    target = rel.get(tid)
    for xt in rel.xtuples():
        if len(xt.alternatives) > 1:
            raise CorrelationPresent(f"x-tuple {xt.xid!r} has {len(xt.alternatives)} alternatives")
    probs = []
    for t in rel.ordered():
        probs.append(t.prob)
        if t.id == target.id:
            break
    return _dp_upsilon(probs, alpha)
