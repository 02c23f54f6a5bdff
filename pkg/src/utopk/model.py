"""Uncertain relations under the x-tuple model.

A relation is a set of pairwise-disjoint x-tuples. Each x-tuple groups
mutually exclusive alternatives whose membership probabilities sum to at
most one. Tuples are totally ordered by ``(score desc, id asc)``; that
order is what "higher-scored" means everywhere in this package.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import Hashable, Iterable, Iterator

MAX_ALTERNATIVES = 10
PROB_SUM_TOL = 1e-12


class ValidationError(ValueError):
    """Raised when a tuple would break a relation invariant."""


class DuplicateId(ValidationError):
    pass


class ProbabilityOutOfRange(ValidationError):
    pass


class InvalidScore(ValidationError):
    pass


class XTupleOverflow(ValidationError):
    pass


class TooManyAlternatives(ValidationError):
    pass


class UnknownId(KeyError):
    pass


@dataclass(frozen=True)
class UncertainTuple:
    id: int
    score: float
    prob: float
    xtuple: Hashable

    @property
    def key(self) -> tuple[float, int]:
        return order_key(self.score, self.id)


def order_key(score: float, tid: int) -> tuple[float, int]:
    """Sort key placing higher scores first and breaking ties by id."""
    return (-score, tid)


@dataclass(frozen=True)
class XTuple:
    xid: Hashable
    alternatives: tuple[UncertainTuple, ...]

    @property
    def total_prob(self) -> float:
        return sum(t.prob for t in self.alternatives)


class XRelation:
    """Mutable collection of x-tuples with id lookup and score ordering."""

    def __init__(
        self,
        tuples: Iterable[UncertainTuple] = (),
        max_alternatives: int = MAX_ALTERNATIVES,
    ) -> None:
        self.max_alternatives = max_alternatives
        self._tuples: dict[int, UncertainTuple] = {}
        # xid -> alternatives sorted by order key
        self._groups: dict[Hashable, list[UncertainTuple]] = {}
        self._order: list[UncertainTuple] | None = None
        for t in tuples:
            self.add(t)

    def __len__(self) -> int:
        return len(self._tuples)

    def __contains__(self, tid: object) -> bool:
        return tid in self._tuples

    def __iter__(self) -> Iterator[UncertainTuple]:
        return iter(self.ordered())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, XRelation):
            return NotImplemented
        return self._tuples == other._tuples

    def __repr__(self) -> str:
        return f"XRelation(N={len(self)}, xtuples={len(self._groups)})"

    def copy(self) -> XRelation:
        return XRelation(self._tuples.values(), self.max_alternatives)

    def get(self, tid: int) -> UncertainTuple:
        try:
            return self._tuples[tid]
        except KeyError:
            raise UnknownId(tid) from None

    def ordered(self) -> list[UncertainTuple]:
        """All tuples in score order (highest first)."""
        if self._order is None:
            self._order = sorted(self._tuples.values(), key=lambda t: t.key)
        return self._order

    def alternatives(self, xid: Hashable) -> list[UncertainTuple]:
        return list(self._groups.get(xid, ()))

    def xtuples(self) -> list[XTuple]:
        return [XTuple(xid, tuple(alts)) for xid, alts in self._groups.items()]

    def add(self, t: UncertainTuple) -> None:
        validate_insert(self, t)
        self._tuples[t.id] = t
        group = self._groups.setdefault(t.xtuple, [])
        keys = [a.key for a in group]
        group.insert(bisect.bisect(keys, t.key), t)
        self._order = None

    def remove(self, tid: int) -> UncertainTuple:
        t = self.get(tid)
        del self._tuples[tid]
        group = self._groups[t.xtuple]
        group.remove(t)
        if not group:
            del self._groups[t.xtuple]
        self._order = None
        return t


def validate_insert(
    rel: XRelation, t: UncertainTuple, replacing: int | None = None
) -> None:
    """Raise a :class:`ValidationError` if adding ``t`` breaks an invariant.

    ``replacing`` names a tuple that is treated as already removed, which
    is how in-place updates are checked.
    """
    if not math.isfinite(t.score):
        raise InvalidScore(f"tuple {t.id}: score must be finite, got {t.score!r}")
    if not (0.0 < t.prob <= 1.0):
        raise ProbabilityOutOfRange(f"tuple {t.id}: prob must lie in (0, 1], got {t.prob!r}")
    if t.id in rel and t.id != replacing:
        raise DuplicateId(f"tuple id {t.id} already present")
    others = [a for a in rel.alternatives(t.xtuple) if a.id not in (t.id, replacing)]
    if len(others) + 1 > rel.max_alternatives:
        raise TooManyAlternatives(
            f"x-tuple {t.xtuple!r} would hold {len(others) + 1} alternatives "
            f"(max {rel.max_alternatives})"
        )
    total = sum(a.prob for a in others) + t.prob
    if total > 1.0 + PROB_SUM_TOL:
        raise XTupleOverflow(f"x-tuple {t.xtuple!r} probability sum {total!r} exceeds 1")


def score_position(rel: XRelation, tid: int) -> int:
    """1-based position of ``tid`` in score order."""
    t = rel.get(tid)
    keys = [u.key for u in rel.ordered()]
    return bisect.bisect_left(keys, t.key) + 1
