"""Brute-force ground truth by possible-world enumeration.

Nothing here uses the closed-form coefficients; rank probabilities are read
directly off every world, so the results can be used to check both the
closed form and the tree index.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .model import XRelation

ORACLE_MAX_N = 20

WeightFunction = Callable[[int], float]


class TooLarge(ValueError):
    pass


@dataclass(frozen=True)
class PossibleWorld:
    tuples: frozenset[int]
    prob: float


def _world_table(rel: XRelation, max_n: int = ORACLE_MAX_N):
    """Presence matrix and probabilities of all worlds with nonzero mass.

    Returns ``(ids, present, probs)`` where ``ids`` lists tuple ids in score
    order and ``present[w, j]`` says whether ``ids[j]`` exists in world ``w``.
    """
    if len(rel) > max_n:
        raise TooLarge(f"{len(rel)} tuples exceeds oracle bound {max_n}")
    ids = [t.id for t in rel.ordered()]
    col = {tid: j for j, tid in enumerate(ids)}
    groups = rel.xtuples()
    if not groups:
        return ids, np.zeros((1, 0), dtype=bool), np.ones(1)
    # choice 0 = no alternative present, choice a+1 = alternative a present
    shape = tuple(len(g.alternatives) + 1 for g in groups)
    n_worlds = int(np.prod(shape, dtype=np.int64))
    choice = np.array(np.unravel_index(np.arange(n_worlds), shape)).reshape(len(groups), n_worlds)
    present = np.zeros((n_worlds, len(ids)), dtype=bool)
    probs = np.ones(n_worlds)
    for xt, ch in zip(groups, choice):
        alt_probs = [t.prob for t in xt.alternatives]
        table = np.array([max(0.0, 1.0 - sum(alt_probs))] + alt_probs)
        probs *= table[ch]
        for a, t in enumerate(xt.alternatives):
            present[:, col[t.id]] = ch == a + 1
    keep = probs > 0
    return ids, present[keep], probs[keep]


def enumerate_worlds(rel: XRelation, max_n: int = ORACLE_MAX_N) -> list[PossibleWorld]:
    ids, present, probs = _world_table(rel, max_n)
    id_arr = np.array(ids, dtype=object)
    return [
        PossibleWorld(frozenset(id_arr[row].tolist()), float(p))
        for row, p in zip(present, probs)
    ]


def rank_distribution(rel: XRelation, max_n: int = ORACLE_MAX_N) -> tuple[list[int], np.ndarray]:
    """``(ids, P)`` with ``P[j, r-1]`` the probability that ``ids[j]`` is ranked ``r``."""
    ids, present, probs = _world_table(rel, max_n)
    n = len(ids)
    P = np.zeros((n, max(n, 1)))
    if n == 0:
        return ids, P
    ranks = np.cumsum(present, axis=1)  # rank of column j if present
    w_idx, j_idx = np.nonzero(present)
    np.add.at(P, (j_idx, ranks[w_idx, j_idx] - 1), probs[w_idx])
    return ids, P


def position_probability(rel: XRelation, tid: int, r: int, max_n: int = ORACLE_MAX_N) -> float:
    rel.get(tid)
    if r < 1:
        raise ValueError(f"rank must be >= 1, got {r}")
    ids, P = rank_distribution(rel, max_n)
    if r > P.shape[1]:
        return 0.0
    return float(P[ids.index(tid), r - 1])


def _prf_all(rel: XRelation, w: WeightFunction, max_n: int) -> dict[int, float]:
    ids, P = rank_distribution(rel, max_n)
    weights = np.array([w(r) for r in range(1, P.shape[1] + 1)], dtype=float)
    return dict(zip(ids, (P @ weights).tolist()))


def prf(rel: XRelation, w: WeightFunction, tid: int, max_n: int = ORACLE_MAX_N) -> float:
    """General rank-weighted score ``sum_r w(r) * Pr(tid ranked r)``."""
    rel.get(tid)
    return _prf_all(rel, w, max_n)[tid]


def exponential_weight(alpha: float) -> WeightFunction:
    return lambda r: alpha ** (r - 1)


def topk_oracle(
    rel: XRelation, alpha: float, k: int, max_n: int = ORACLE_MAX_N
) -> list[tuple[int, float]]:
    """Top-k by sorting enumerated rank-scores.

    Equal rank-scores are ordered lower-scored tuple first, which is the
    order the tree index produces when its merge comparison ties.
    """
    if k <= 0:
        return []
    scores = _prf_all(rel, exponential_weight(alpha), max_n)
    pos = {t.id: i for i, t in enumerate(rel.ordered())}
    ranked = sorted(scores.items(), key=lambda kv: (-kv[1], -pos[kv[0]]))
    return ranked[:k]
