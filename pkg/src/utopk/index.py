"""Fully dynamic top-k index over an uncertain relation.

The index is a leaf-oriented AVL tree. Leaves hold tuples in score order
(highest score leftmost); every internal node has exactly two children and
carries a triple ``(top, M, C)``:

* ``top`` is the tuple with the highest rank-score within the subtree's
  sub-relation,
* ``M`` is that tuple's rank-score computed over the subtree alone,
* ``C`` is the product of every ``c`` coefficient in the subtree, i.e. the
  factor the subtree contributes to all tuples to its right.

Because the coefficient of a tuple only depends on its own x-tuple, the
root's ``top``/``M`` is the global top-1 and its rank-score. Top-k repeats
that lookup after zeroing each reported leaf's ``m``, then restores.

The index requires exclusive access: ``top_k`` mutates the tree transiently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterator

from .model import (
    MAX_ALTERNATIVES,
    UncertainTuple,
    UnknownId,
    XRelation,
    validate_insert,
)
from .rankmath import DEFAULT_ALPHA, LeafCoefficients, check_alpha, coefficients, leaf_coefficients


class AuditError(AssertionError):
    """A node's stored augmentation disagrees with its children."""


class Node:
    __slots__ = (
        "parent", "left", "right", "height",
        "top", "M", "C", "lo", "hi",
        "tuple", "m", "c", "hat_p",
    )

    def __init__(self) -> None:
        self.parent: Node | None = None
        self.left: Node | None = None
        self.right: Node | None = None
        self.height = 1
        self.tuple: UncertainTuple | None = None

    @property
    def is_leaf(self) -> bool:
        return self.tuple is not None

    def __repr__(self) -> str:
        kind = f"leaf {self.tuple.id}" if self.is_leaf else "node"
        return f"<{kind} top={self.top} M={self.M:.6g} C={self.C:.6g}>"


def merge_node(v: Node, w: Node) -> tuple[int, float, float]:
    """Combine the higher-score child ``v`` with the lower-score child ``w``.

    On equality the lower-score child wins.
    """
    through = v.C * w.M
    if v.M > through:
        return v.top, v.M, v.C * w.C
    return w.top, through, v.C * w.C


@dataclass(frozen=True)
class TopKResult:
    entries: tuple[tuple[int, float], ...]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    @property
    def ids(self) -> list[int]:
        return [tid for tid, _ in self.entries]

    @property
    def scores(self) -> list[float]:
        return [u for _, u in self.entries]


class TopKIndex:
    """Augmented balanced tree answering top-k rank-score queries.

    Parameters
    ----------
    alpha : float
        Rank decay in ``(0, 1)``. Fixed for the lifetime of the index since
        every stored coefficient depends on it.
    max_alternatives : int
        Upper bound on alternatives per x-tuple; keeps the number of leaf
        updates per tuple insert/delete constant.
    """

    def __init__(self, alpha: float = DEFAULT_ALPHA, max_alternatives: int = MAX_ALTERNATIVES) -> None:
        self.alpha = check_alpha(alpha)
        self.relation = XRelation(max_alternatives=max_alternatives)
        self.root: Node | None = None
        self._leaves: dict[int, Node] = {}
        # count of node recomputations, for complexity measurements
        self.merges = 0

    @classmethod
    def build(cls, rel: XRelation, alpha: float = DEFAULT_ALPHA) -> TopKIndex:
        index = cls(alpha, rel.max_alternatives)
        index.relation = rel.copy()
        coef = leaf_coefficients(index.relation, index.alpha)
        leaves = [index._new_leaf(t, coef[t.id]) for t in index.relation.ordered()]
        if leaves:
            index.root = index._build(leaves, 0, len(leaves))
        return index

    def _build(self, leaves: list[Node], lo: int, hi: int) -> Node:
        if hi - lo == 1:
            return leaves[lo]
        mid = lo + (hi - lo + 1) // 2
        node = Node()
        node.left = self._build(leaves, lo, mid)
        node.right = self._build(leaves, mid, hi)
        node.left.parent = node.right.parent = node
        self._pull(node)
        return node

    def __len__(self) -> int:
        return len(self._leaves)

    def __contains__(self, tid: object) -> bool:
        return tid in self._leaves

    @property
    def height(self) -> int:
        return self.root.height if self.root else 0

    def leaf(self, tid: int) -> Node:
        try:
            return self._leaves[tid]
        except KeyError:
            raise UnknownId(tid) from None

    # -- tree primitives -------------------------------------------------

    def _new_leaf(self, t: UncertainTuple, lc: LeafCoefficients) -> Node:
        leaf = Node()
        leaf.tuple = t
        leaf.m, leaf.c, leaf.hat_p = lc.m, lc.c, lc.hat_p
        leaf.top, leaf.M, leaf.C = t.id, lc.m, lc.c
        leaf.lo = leaf.hi = t.key
        self._leaves[t.id] = leaf
        return leaf

    def _pull(self, node: Node) -> None:
        left, right = node.left, node.right
        node.height = 1 + max(left.height, right.height)
        node.lo, node.hi = left.lo, right.hi
        node.top, node.M, node.C = merge_node(left, right)
        self.merges += 1

    def _replace(self, old: Node, new: Node) -> None:
        parent = old.parent
        new.parent = parent
        if parent is None:
            self.root = new
        elif parent.left is old:
            parent.left = new
        else:
            parent.right = new

    def _rotate_right(self, y: Node) -> Node:
        x = y.left
        self._replace(y, x)
        y.left = x.right
        y.left.parent = y
        x.right = y
        y.parent = x
        self._pull(y)
        self._pull(x)
        return x

    def _rotate_left(self, x: Node) -> Node:
        y = x.right
        self._replace(x, y)
        x.right = y.left
        x.right.parent = x
        y.left = x
        x.parent = y
        self._pull(x)
        self._pull(y)
        return y

    def _rebalance(self, node: Node) -> Node:
        self._pull(node)
        balance = node.left.height - node.right.height
        if balance > 1:
            if node.left.left.height < node.left.right.height:
                self._rotate_left(node.left)
            return self._rotate_right(node)
        if balance < -1:
            if node.right.right.height < node.right.left.height:
                self._rotate_right(node.right)
            return self._rotate_left(node)
        return node

    def _retrace(self, node: Node | None) -> None:
        while node is not None:
            node = self._rebalance(node).parent

    def _insert_leaf(self, leaf: Node) -> None:
        if self.root is None:
            self.root = leaf
            return
        key = leaf.lo
        node = self.root
        while not node.is_leaf:
            node = node.left if key <= node.left.hi else node.right
        u = Node()
        self._replace(node, u)
        u.left, u.right = (leaf, node) if key < node.lo else (node, leaf)
        leaf.parent = node.parent = u
        self._retrace(u)

    def _delete_leaf(self, leaf: Node) -> None:
        del self._leaves[leaf.tuple.id]
        parent = leaf.parent
        if parent is None:
            self.root = None
            return
        sibling = parent.left if parent.right is leaf else parent.right
        self._replace(parent, sibling)
        self._retrace(sibling.parent)

    def update_leaf(self, tid: int, m: float, c: float) -> None:
        """Replace a leaf's coefficients and re-merge its root path."""
        leaf = self.leaf(tid)
        leaf.m, leaf.c = m, c
        leaf.M, leaf.C = m, c
        node = leaf.parent
        while node is not None:
            self._pull(node)
            node = node.parent

    # -- tuple operations ------------------------------------------------

    def _refresh_below(self, xid, key) -> None:
        # alternatives ranked below `key` see a new hat_p
        hp = 0.0
        for alt in self.relation.alternatives(xid):
            if alt.key > key:
                lc = coefficients(alt.prob, hp, self.alpha)
                self._leaves[alt.id].hat_p = hp
                self.update_leaf(alt.id, lc.m, lc.c)
            hp += alt.prob

    def insert_tuple(self, t: UncertainTuple) -> None:
        validate_insert(self.relation, t)
        self.relation.add(t)
        hp = 0.0
        for alt in self.relation.alternatives(t.xtuple):
            if alt.key >= t.key:
                break
            hp += alt.prob
        self._insert_leaf(self._new_leaf(t, coefficients(t.prob, hp, self.alpha)))
        self._refresh_below(t.xtuple, t.key)

    def delete_tuple(self, tid: int) -> UncertainTuple:
        leaf = self.leaf(tid)
        t = leaf.tuple
        self._delete_leaf(leaf)
        self.relation.remove(tid)
        self._refresh_below(t.xtuple, t.key)
        return t

    def update_tuple(self, tid: int, score: float | None = None, prob: float | None = None) -> None:
        """Change a tuple's score and/or probability.

        The new values are validated before anything is touched, so a
        rejected update leaves the index as it was.
        """
        old = self.leaf(tid).tuple
        new = replace(
            old,
            score=old.score if score is None else float(score),
            prob=old.prob if prob is None else float(prob),
        )
        validate_insert(self.relation, new, replacing=tid)
        self.delete_tuple(tid)
        self.insert_tuple(new)

    # -- queries ---------------------------------------------------------

    def top(self) -> tuple[int, float] | None:
        if self.root is None:
            return None
        return self.root.top, self.root.M

    def top_k(self, k: int) -> TopKResult:
        k = min(k, len(self))
        if k <= 0:
            return TopKResult(())
        out: list[tuple[int, float]] = []
        saved: list[tuple[Node, float]] = []
        try:
            while len(out) < k:
                leaf = self._leaves[self.root.top]
                if leaf.m == 0.0:
                    # every remaining rank-score is exactly zero and the
                    # merge tie rule surfaced an already reported leaf
                    out.extend(self._zero_tail(k - len(out), {n for n, _ in saved}))
                    break
                out.append((leaf.tuple.id, self.root.M))
                saved.append((leaf, leaf.m))
                self.update_leaf(leaf.tuple.id, 0.0, leaf.c)
        finally:
            for leaf, m in reversed(saved):
                self.update_leaf(leaf.tuple.id, m, leaf.c)
        return TopKResult(tuple(out))

    def _zero_tail(self, count: int, skip: set[Node]) -> list[tuple[int, float]]:
        out = []
        for leaf in reversed(list(self.leaves())):
            if leaf not in skip:
                out.append((leaf.tuple.id, 0.0))
                if len(out) == count:
                    break
        return out

    def rank_scores(self) -> dict[int, float]:
        """Rank-score of every tuple from the stored leaf coefficients."""
        out = {}
        prefix = 1.0
        for leaf in self.leaves():
            out[leaf.tuple.id] = leaf.m * prefix
            prefix *= leaf.c
        return out

    # -- traversal and debugging -----------------------------------------

    def nodes(self) -> Iterator[Node]:
        stack = [self.root] if self.root else []
        while stack:
            node = stack.pop()
            yield node
            if not node.is_leaf:
                stack.append(node.right)
                stack.append(node.left)

    def leaves(self) -> Iterator[Node]:
        """Leaves left to right, i.e. in score order."""
        return (n for n in self.nodes() if n.is_leaf)

    def audit(self) -> None:
        """Verify every stored augmentation and structural invariant.

        Raises :class:`AuditError` on the first violation found.
        """
        def fail(msg: str) -> None:
            raise AuditError(msg)

        if self.root is None:
            if self._leaves or len(self.relation):
                fail("empty tree but leaves or relation tuples remain")
            return
        if self.root.parent is not None:
            fail("root has a parent")
        n_leaves = 0
        prev_key = None
        for node in self.nodes():
            if node.is_leaf:
                n_leaves += 1
                t = node.tuple
                if self._leaves.get(t.id) is not node:
                    fail(f"leaf {t.id} missing from id map")
                if self.relation.get(t.id) != t:
                    fail(f"leaf {t.id} disagrees with relation")
                if prev_key is not None and not prev_key < t.key:
                    fail(f"leaf {t.id} out of score order")
                prev_key = t.key
                if node.lo != t.key or node.hi != t.key or node.height != 1:
                    fail(f"leaf {t.id} bookkeeping corrupt")
                if node.top != t.id or node.M != node.m or node.C != node.c:
                    fail(f"leaf {t.id}: (top, M, C) = {(node.top, node.M, node.C)} "
                         f"!= {(t.id, node.m, node.c)}")
                hp = 0.0
                for alt in self.relation.alternatives(t.xtuple):
                    if alt.key >= t.key:
                        break
                    hp += alt.prob
                lc = coefficients(t.prob, hp, self.alpha)
                if not (math.isclose(node.m, lc.m, rel_tol=1e-12)
                        and math.isclose(node.c, lc.c, rel_tol=1e-12)
                        and math.isclose(node.hat_p, hp, rel_tol=1e-12, abs_tol=1e-15)):
                    fail(f"leaf {t.id}: coefficients stale")
                continue
            left, right = node.left, node.right
            if left is None or right is None:
                fail("internal node with a missing child")
            if left.parent is not node or right.parent is not node:
                fail("broken parent pointer")
            if node.height != 1 + max(left.height, right.height):
                fail("stale height")
            if abs(left.height - right.height) > 1:
                fail("AVL balance violated")
            if node.lo != left.lo or node.hi != right.hi or not left.hi < right.lo:
                fail("key range corrupt")
            expect = merge_node(left, right)
            if (node.top, node.M, node.C) != expect:
                fail(f"node (top, M, C) = {(node.top, node.M, node.C)} != merge {expect}")
        if n_leaves != len(self._leaves) or n_leaves != len(self.relation):
            fail(f"{n_leaves} leaves, {len(self._leaves)} mapped, {len(self.relation)} tuples")

    def _tamper(self, node: Node, field: str, delta: float) -> None:
        """Test hook: perturb one stored augmentation field in place."""
        if field == "top":
            others = [tid for tid in self._leaves if tid != node.top]
            node.top = others[0] if others else -node.top - 1
        else:
            setattr(node, field, getattr(node, field) + delta)
