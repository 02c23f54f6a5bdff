"""Command-line driver: ``utopk gen|run|topk|bench``.

Exit status is 0 on success, 1 on validation or parse errors and 2 when a
node audit fails.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import bench as bench_mod
from .data import (
    PAPER_BAND,
    GeneratorConfig,
    InvalidConfig,
    ParseError,
    generate,
    illustrative_config,
    ingest_csv,
    write_csv,
)
from .index import AuditError, TopKIndex
from .model import UnknownId, ValidationError
from .rankmath import DEFAULT_ALPHA, DomainError
from .script import ScriptError, parse_script, run_script

log = logging.getLogger("utopk")


def _cmd_gen(args) -> None:
    if args.illustrative:
        cfg = illustrative_config(args.n, args.seed)
    else:
        cfg = GeneratorConfig(n=args.n, seed=args.seed, prob_band=tuple(args.band))
    rel = generate(cfg)
    write_csv(rel, args.out)
    log.info("wrote %d tuples to %s", len(rel), args.out)


def _cmd_run(args) -> None:
    rel = ingest_csv(args.input)
    with open(args.script, encoding="utf-8") as f:
        script = parse_script(f)
    for line in run_script(rel, args.alpha, script):
        print(line)


def _cmd_topk(args) -> None:
    index = TopKIndex.build(ingest_csv(args.input), args.alpha)
    print("rank,id,score,upsilon")
    for rank, (tid, ups) in enumerate(index.top_k(args.k), start=1):
        print(f"{rank},{tid},{index.leaf(tid).tuple.score!r},{ups!r}")


def _cmd_bench(args) -> None:
    rows = bench_mod.bench(
        args.workload, args.n or [100_000], seed=args.seed, reps=args.reps,
        warmup=args.warmup, k=args.k, alpha=args.alpha,
    )
    bench_mod.write_rows(rows, args.out)
    log.info("wrote %d rows to %s", len(rows), args.out)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="utopk", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a synthetic relation as CSV")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.add_argument("--band", type=float, nargs=2, default=list(PAPER_BAND), metavar=("LO", "HI"))
    g.add_argument("--illustrative", action="store_true",
                   help="probabilities in (0.1, 0.9), 1-3 alternatives per x-tuple")
    g.set_defaults(func=_cmd_gen)

    r = sub.add_parser("run", help="execute an operation script against a CSV relation")
    r.add_argument("--input", required=True)
    r.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    r.add_argument("--script", required=True)
    r.set_defaults(func=_cmd_run)

    t = sub.add_parser("topk", help="print the top-k tuples of a CSV relation")
    t.add_argument("--input", required=True)
    t.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    t.add_argument("-k", type=int, required=True)
    t.set_defaults(func=_cmd_topk)

    b = sub.add_parser("bench", help="time index operations, write CSV")
    b.add_argument("--workload", required=True)
    b.add_argument("--n", type=int, action="append", help="relation size, repeatable")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--out", required=True)
    b.add_argument("--reps", type=int, default=1000)
    b.add_argument("--warmup", type=int, default=50)
    b.add_argument("-k", type=int, default=10, help="k for the ops-vs-n top-k rows")
    b.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    b.set_defaults(func=_cmd_bench)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        args.func(args)
    except AuditError as e:
        print(f"audit failed: {e}", file=sys.stderr)
        return 2
    except (ValidationError, ParseError, ScriptError, InvalidConfig, DomainError,
            bench_mod.InvalidWorkload, UnknownId, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
