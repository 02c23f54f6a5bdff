from __future__ import annotations

import numpy as np
import pytest

from utopk import UncertainTuple, XRelation
from utopk.data import traffic_relation


def random_relation(rng: np.random.Generator, n: int, max_alts: int = 3) -> XRelation:
    """Random relation with up to ``max_alts`` alternatives per x-tuple."""
    rel = XRelation()
    tid = 0
    x = 0
    while tid < n:
        size = min(int(rng.integers(1, max_alts + 1)), n - tid)
        probs = rng.uniform(0.05, 1.0, size=size)
        # keep some x-tuples under-full and a few nearly exhausted
        probs *= rng.uniform(0.3, 1.0) / max(1.0, probs.sum())
        for p in probs:
            tid += 1
            rel.add(UncertainTuple(tid, float(rng.uniform(0, 100)), float(p), f"x{x}"))
        x += 1
    return rel


@pytest.fixture
def traffic() -> XRelation:
    return traffic_relation()


@pytest.fixture
def worked() -> XRelation:
    """Four tuples, ids 2 and 3 mutually exclusive."""
    rows = [(1, 40.0, 0.35, "a"), (2, 30.0, 0.3, "b"), (3, 20.0, 0.4, "b"), (4, 10.0, 0.45, "d")]
    return XRelation(UncertainTuple(*r) for r in rows)


_ACCEPTANCE: list[tuple[str, str]] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call" and item.module.__name__.endswith("test_acceptance"):
        doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
        _ACCEPTANCE.append(("PASS" if rep.passed else "FAIL", doc))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for status, doc in _ACCEPTANCE:
        terminalreporter.write_line(f"[{status}] {doc}")
