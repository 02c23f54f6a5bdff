"""Synthetic relations and CSV round-tripping.

CSV layout: header ``tuple_id,xtuple_id,score,probability``. A
``confidence`` column may replace ``probability``; its sighting-source
labels are mapped to fixed probabilities. Rows sharing an ``xtuple_id``
are alternatives of one x-tuple; a blank ``xtuple_id`` makes the row an
independent tuple.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .model import MAX_ALTERNATIVES, UncertainTuple, ValidationError, XRelation

PAPER_BAND = (0.5e-5, 1.5e-5)
ILLUSTRATIVE_BAND = (0.1, 0.9)

CONFIDENCE_PROB = {
    "R/V": 0.8,
    "VIS": 0.7,
    "RAD": 0.6,
    "SAT-LOW": 0.5,
    "SAT-MED": 0.4,
    "SAT-HIGH": 0.3,
    "EST": 0.4,
}

HEADER = ("tuple_id", "xtuple_id", "score", "probability")


class InvalidConfig(ValueError):
    pass


class ParseError(ValueError):
    def __init__(self, msg: str, row: int | None = None, column: str | None = None):
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        super().__init__(f"{', '.join(where)}: {msg}" if where else msg)
        self.row = row
        self.column = column


@dataclass(frozen=True)
class GeneratorConfig:
    """Parameters of the synthetic workload.

    With ``rescale`` set, an x-tuple whose drawn probabilities sum above
    one is scaled down to sum to ``max_xtuple_mass``; otherwise a band wide
    enough to overflow an x-tuple is rejected outright.
    """

    n: int = 100_000
    score_range: tuple[float, float] = (0.0, 100_000.0)
    prob_band: tuple[float, float] = PAPER_BAND
    alts_range: tuple[int, int] = (2, 10)
    seed: int = 0
    rescale: bool = False
    max_xtuple_mass: float = 0.95

    def check(self) -> None:
        lo, hi = self.prob_band
        a_lo, a_hi = self.alts_range
        if self.n < 0:
            raise InvalidConfig(f"n must be non-negative, got {self.n}")
        if not (0.0 < lo <= hi <= 1.0):
            raise InvalidConfig(f"probability band {self.prob_band} must satisfy 0 < lo <= hi <= 1")
        if not (1 <= a_lo <= a_hi <= MAX_ALTERNATIVES):
            raise InvalidConfig(f"alternatives range {self.alts_range} outside [1, {MAX_ALTERNATIVES}]")
        if self.score_range[0] > self.score_range[1]:
            raise InvalidConfig(f"score range {self.score_range} is reversed")
        if not self.rescale and hi * a_hi > 1.0:
            raise InvalidConfig(
                f"band upper {hi} times {a_hi} alternatives can exceed 1; "
                "narrow the band or enable rescale"
            )


def illustrative_config(n: int, seed: int = 0) -> GeneratorConfig:
    """Small correlated relations with probabilities large enough to read."""
    return GeneratorConfig(n=n, prob_band=ILLUSTRATIVE_BAND, alts_range=(1, 3), seed=seed, rescale=True)


def generate(config: GeneratorConfig) -> XRelation:
    """Deterministic synthetic relation; the final x-tuple may be truncated to hit ``n``."""
    config.check()
    rng = np.random.default_rng(config.seed)
    sizes = []
    total = 0
    while total < config.n:
        s = int(rng.integers(config.alts_range[0], config.alts_range[1] + 1))
        s = min(s, config.n - total)
        sizes.append(s)
        total += s
    scores = rng.uniform(*config.score_range, size=config.n)
    probs = rng.uniform(*config.prob_band, size=config.n)
    rel = XRelation()
    start = 0
    for x, s in enumerate(sizes):
        chunk = probs[start:start + s]
        mass = chunk.sum()
        if config.rescale and mass > 1.0:
            chunk = chunk * (config.max_xtuple_mass / mass)
        for j in range(s):
            i = start + j
            rel.add(UncertainTuple(i + 1, float(scores[i]), float(chunk[j]), f"x{x + 1}"))
        start += s
    return rel


def traffic_relation() -> XRelation:
    """Six radar readings with two exclusive pairs: {2, 4} and {3, 6}."""
    rows = [
        (1, 130.0, 0.30, "x1"),
        (2, 120.0, 0.40, "x2"),
        (3, 110.0, 0.20, "x3"),
        (4, 105.0, 0.50, "x2"),
        (5, 95.0, 0.30, "x5"),
        (6, 80.0, 0.45, "x3"),
    ]
    return XRelation(UncertainTuple(*r) for r in rows)


def _parse_rows(rows: Iterable[dict], fieldnames: list[str]) -> XRelation:
    missing = {"tuple_id", "score"} - set(fieldnames)
    if missing:
        raise ParseError(f"missing columns {sorted(missing)}", row=1)
    if "probability" in fieldnames:
        prob_col = "probability"
    elif "confidence" in fieldnames:
        prob_col = "confidence"
    else:
        raise ParseError("need a 'probability' or 'confidence' column", row=1)
    rel = XRelation()
    for lineno, row in enumerate(rows, start=2):
        try:
            tid = int(row["tuple_id"])
        except (TypeError, ValueError):
            raise ParseError(f"bad tuple id {row['tuple_id']!r}", lineno, "tuple_id") from None
        try:
            score = float(row["score"])
        except (TypeError, ValueError):
            raise ParseError(f"bad score {row['score']!r}", lineno, "score") from None
        raw = (row[prob_col] or "").strip()
        if prob_col == "confidence":
            if raw not in CONFIDENCE_PROB:
                raise ParseError(f"unknown confidence level {raw!r}", lineno, "confidence")
            prob = CONFIDENCE_PROB[raw]
        else:
            try:
                prob = float(raw)
            except ValueError:
                raise ParseError(f"bad probability {raw!r}", lineno, "probability") from None
        xid = (row.get("xtuple_id") or "").strip() or f"_t{tid}"
        try:
            rel.add(UncertainTuple(tid, score, prob, xid))
        except ValidationError as e:
            raise type(e)(f"row {lineno}: {e}") from e
    return rel


def ingest_csv(path: str | os.PathLike) -> XRelation:
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None:
            raise ParseError("empty file, expected a header")
        return _parse_rows(reader, list(reader.fieldnames))


def write_csv(rel: XRelation, path: str | os.PathLike) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(HEADER)
        for t in rel.ordered():
            w.writerow([t.id, t.xtuple, repr(t.score), repr(t.prob)])
