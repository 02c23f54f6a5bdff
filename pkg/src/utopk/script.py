"""Plain-text operation scripts driven against an index.

One command per line, whitespace separated, ``#`` starts a comment::

    INSERT <id> <xid> <score> <prob>
    DELETE <id>
    UPDATE <id> <score> <prob>
    TOPK <k>
    AUDIT

Tuple ids may carry a ``t`` prefix (``DELETE t4`` is ``DELETE 4``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .index import AuditError, TopKIndex
from .model import UncertainTuple, UnknownId, ValidationError, XRelation


class ScriptError(Exception):
    def __init__(self, index: int, msg: str):
        super().__init__(f"command {index}: {msg}")
        self.index = index


@dataclass(frozen=True)
class Command:
    op: str
    args: tuple


_ARITY = {"INSERT": 4, "DELETE": 1, "UPDATE": 3, "TOPK": 1, "AUDIT": 0}


def _tid(s: str) -> int:
    return int(s[1:] if s[:1] in "tT" else s)


def parse_script(lines: Iterable[str]) -> list[Command]:
    commands = []
    for lineno, line in enumerate(lines, start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        op, *args = line.split()
        op = op.upper()
        if op not in _ARITY:
            raise ScriptError(len(commands) + 1, f"line {lineno}: unknown command {op!r}")
        if len(args) != _ARITY[op]:
            raise ScriptError(len(commands) + 1, f"line {lineno}: {op} takes {_ARITY[op]} arguments")
        try:
            if op == "INSERT":
                parsed = (_tid(args[0]), args[1], float(args[2]), float(args[3]))
            elif op == "DELETE":
                parsed = (_tid(args[0]),)
            elif op == "UPDATE":
                parsed = (_tid(args[0]), float(args[1]), float(args[2]))
            elif op == "TOPK":
                parsed = (int(args[0]),)
            else:
                parsed = ()
        except ValueError as e:
            raise ScriptError(len(commands) + 1, f"line {lineno}: {e}") from None
        commands.append(Command(op, parsed))
    return commands


def run_script(rel: XRelation, alpha: float, script: list[Command]) -> list[str]:
    """Execute ``script`` against a fresh index; returns the report lines.

    ``TOPK`` emits a ``rank,id,score,upsilon`` header followed by one line
    per result. An ``AUDIT`` violation propagates as :class:`AuditError`.
    """
    index = TopKIndex.build(rel, alpha)
    report: list[str] = []
    for i, cmd in enumerate(script, start=1):
        try:
            if cmd.op == "INSERT":
                tid, xid, score, prob = cmd.args
                index.insert_tuple(UncertainTuple(tid, score, prob, xid))
            elif cmd.op == "DELETE":
                index.delete_tuple(cmd.args[0])
            elif cmd.op == "UPDATE":
                tid, score, prob = cmd.args
                index.update_tuple(tid, score=score, prob=prob)
            elif cmd.op == "TOPK":
                report.append("rank,id,score,upsilon")
                for rank, (tid, ups) in enumerate(index.top_k(cmd.args[0]), start=1):
                    report.append(f"{rank},{tid},{index.leaf(tid).tuple.score!r},{ups!r}")
            else:
                index.audit()
                report.append("AUDIT ok")
        except AuditError as e:
            raise AuditError(f"command {i}: {e}") from e
        except (ValidationError, UnknownId) as e:
            raise ScriptError(i, f"{cmd.op}: {e!s}") from e
    return report
