"""Latency benchmarks for the index.

Workloads
---------
``topk-vs-k``
    fixed relation size, top-k latency for k = 10, 20, ..., 100.
``ops-vs-n``
    insert, delete and top-k latency for each requested relation size.

Op sequences are drawn from the seed alone, so two runs with the same
seed execute the same operations; only the timings differ.
"""

from __future__ import annotations

import csv
import gc
import os
import time
from contextlib import contextmanager
from dataclasses import dataclass, replace

import numpy as np

from .data import GeneratorConfig, generate
from .index import TopKIndex
from .model import UncertainTuple, XRelation
from .rankmath import DEFAULT_ALPHA

WORKLOADS = ("topk-vs-k", "ops-vs-n")
TOPK_KS = tuple(range(10, 101, 10))
FIELDS = ("workload", "n", "k", "op", "mean_ns", "p99_ns")


class InvalidWorkload(ValueError):
    pass


@dataclass(frozen=True)
class Workload:
    inserts: list[UncertainTuple]
    deletes: list[int]


def make_workload(rel: XRelation, count: int, seed: int, band: tuple[float, float]) -> Workload:
    """``count`` inserts into x-tuples with spare mass, then ``count`` random deletes.

    Inserted tuples join an existing x-tuple whenever one has room for
    both another alternative and the drawn probability, so their
    insertion exercises related-leaf updates.
    """
    rng = np.random.default_rng([seed, 1])
    groups = {xt.xid: [len(xt.alternatives), xt.total_prob] for xt in rel.xtuples()}
    xids = sorted(groups)
    next_id = max((t.id for t in rel.ordered()), default=0) + 1
    lo_score = min((t.score for t in rel.ordered()), default=0.0)
    hi_score = max((t.score for t in rel.ordered()), default=100_000.0)
    inserts = []
    for j in range(count):
        prob = float(rng.uniform(*band))
        score = float(rng.uniform(lo_score, hi_score))
        xid = None
        for _ in range(8):
            cand = xids[int(rng.integers(len(xids)))] if xids else None
            if cand is not None:
                size, mass = groups[cand]
                if size < rel.max_alternatives and mass + prob < 1.0:
                    xid = cand
                    break
        if xid is None:
            xid = f"b{seed}_{j}"
            groups[xid] = [0, 0.0]
        groups[xid][0] += 1
        groups[xid][1] += prob
        inserts.append(UncertainTuple(next_id + j, score, prob, xid))
    pool = sorted([t.id for t in rel.ordered()] + [t.id for t in inserts])
    victims = rng.choice(len(pool), size=min(count, len(pool)), replace=False)
    return Workload(inserts, [pool[int(v)] for v in victims])


def _summary(samples: list[int]) -> tuple[float, float]:
    arr = np.asarray(samples, dtype=float)
    return float(arr.mean()), float(np.percentile(arr, 99))


@contextmanager
def _no_gc():
    # same policy as timeit: collector pauses would dominate sub-ms samples
    enabled = gc.isenabled()
    gc.disable()
    try:
        yield
    finally:
        if enabled:
            gc.enable()


def time_topk(index: TopKIndex, k: int, reps: int, warmup: int) -> list[int]:
    clock = time.perf_counter_ns
    out = []
    with _no_gc():
        for i in range(warmup + reps):
            t0 = clock()
            index.top_k(k)
            dt = clock() - t0
            if i >= warmup:
                out.append(dt)
    return out


def time_updates(index: TopKIndex, work: Workload, warmup: int) -> tuple[list[int], list[int]]:
    """Apply the workload, returning per-op insert and delete latencies."""
    clock = time.perf_counter_ns
    ins, dels = [], []
    with _no_gc():
        for i, t in enumerate(work.inserts):
            t0 = clock()
            index.insert_tuple(t)
            dt = clock() - t0
            if i >= warmup:
                ins.append(dt)
        for i, tid in enumerate(work.deletes):
            t0 = clock()
            index.delete_tuple(tid)
            dt = clock() - t0
            if i >= warmup:
                dels.append(dt)
    return ins, dels


def bench(
    workload: str,
    ns: list[int],
    seed: int = 0,
    reps: int = 1000,
    warmup: int = 50,
    k: int = 10,
    config: GeneratorConfig | None = None,
    alpha: float = DEFAULT_ALPHA,
) -> list[dict]:
    """Run a named workload and return one row dict per measurement."""
    if workload not in WORKLOADS:
        raise InvalidWorkload(f"unknown workload {workload!r}; choose from {', '.join(WORKLOADS)}")
    base = config or GeneratorConfig()
    rows = []
    for n in ns:
        cfg = replace(base, n=n, seed=seed)
        rel = generate(cfg)
        index = TopKIndex.build(rel, alpha)
        if workload == "topk-vs-k":
            for kk in TOPK_KS:
                mean, p99 = _summary(time_topk(index, kk, reps, warmup))
                rows.append(dict(workload=workload, n=n, k=kk, op="topk", mean_ns=mean, p99_ns=p99))
            continue
        work = make_workload(rel, warmup + reps, seed, cfg.prob_band)
        ins, dels = time_updates(index, work, warmup)
        for op, samples in (("insert", ins), ("delete", dels)):
            mean, p99 = _summary(samples)
            rows.append(dict(workload=workload, n=n, k="", op=op, mean_ns=mean, p99_ns=p99))
        mean, p99 = _summary(time_topk(index, k, reps, warmup))
        rows.append(dict(workload=workload, n=n, k=k, op="topk", mean_ns=mean, p99_ns=p99))
    return rows


def write_rows(rows: list[dict], path: str | os.PathLike) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.DictWriter(f, fieldnames=FIELDS)
        w.writeheader()
        for row in rows:
            w.writerow({**row, "mean_ns": f"{row['mean_ns']:.1f}", "p99_ns": f"{row['p99_ns']:.1f}"})
