"""Command line surface: solve, verify-parity, trace, labels.

Outputs are machine-readable and byte-deterministic: JSON objects use a
fixed key order and floats are printed with 17 significant digits, so the
same invocation always produces identical stdout.  Exit codes: 0 success
(or converged), 1 usage or evaluation errors, 2 checks failed or not
converged, 3 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import datetime
import json
import os
import sys
from dataclasses import dataclass

from . import __version__
from .functions import builtin, parse
from .grid import GridSpec
from .labeling import Labeling, MapEvaluationFailed, MapFn
from .search import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    LabelingInvalid,
    ParityReport,
    PathTrace,
    StepLimitExceeded,
    parity_check,
    path_follow,
)
from .render import trace_svg
from .solver import SolveConfig, SolveReport, solve

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CHECK_FAILED = 2
EXIT_BUDGET = 3

BUDGET_ENV = "STRINGCHASE_BUDGET"


class UsageError(Exception):
    pass


class SvgUnsupportedDimension(Exception):
    pass


# Deterministic JSON: insertion-ordered keys, floats at 17 significant digits.

def fmt_float(x: float) -> str:
    return format(float(x), ".17g")


def dump_json(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return fmt_float(value)
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        inner = ", ".join(f"{json.dumps(k)}: {dump_json(v)}" for k, v in value.items())
        return "{" + inner + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(dump_json(v) for v in value) + "]"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def solve_report_payload(report: SolveReport) -> dict:
    return {
        "n": report.n,
        "z": list(report.z),
        "residual": report.residual,
        "m_final": report.m_final,
        "converged": report.converged,
        "certificate": {
            "base": list(report.certificate.string.base),
            "perm": list(report.certificate.string.perm),
            "labels": list(report.certificate.labels),
        },
        "history": [
            {"m": h.m, "residual": h.residual, "diameter": h.diameter, "evals": h.evals}
            for h in report.history
        ],
    }


def parity_payload(report: ParityReport) -> dict:
    return {
        "levels": [
            {
                "k": lv.k,
                "S1": lv.s1,
                "S2": lv.s2,
                "T1": lv.t1,
                "T2": lv.t2,
                "identity_ok": lv.identity_ok,
                "odd_ok": lv.odd_ok,
            }
            for lv in report.levels
        ]
    }


def trace_payload(trace: PathTrace) -> dict:
    return {
        "steps": [
            {
                "level": s.level,
                "base": list(s.string.base),
                "perm": list(s.string.perm),
                "entry": s.entry,
                "exit": s.exit,
            }
            for s in trace.steps
        ],
        "outcome": trace.outcome,
    }


@dataclass
class RunRecord:
    """Provenance wrapper written by --record: inputs, time, payload."""

    command: str
    arguments: list[str]
    timestamp: str
    version: str
    payload: dict

    def to_json(self) -> str:
        return dump_json(
            {
                "command": self.command,
                "arguments": self.arguments,
                "timestamp": self.timestamp,
                "version": self.version,
                "payload": self.payload,
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "RunRecord":
        data = json.loads(text)
        return cls(
            command=data["command"],
            arguments=list(data["arguments"]),
            timestamp=data["timestamp"],
            version=data["version"],
            payload=data["payload"],
        )


def _write_record(args, payload: dict) -> None:
    if getattr(args, "record", None):
        record = RunRecord(
            command=args.command,
            arguments=list(args._argv),
            timestamp=datetime.datetime.now(datetime.timezone.utc).isoformat(),
            version=__version__,
            payload=payload,
        )
        with open(args.record, "w", encoding="utf-8") as fh:
            fh.write(record.to_json() + "\n")


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); we reserve 2
        raise UsageError(message)


def _add_map_arguments(sp) -> None:
    group = sp.add_mutually_exclusive_group(required=True)
    group.add_argument("--map", help="semicolon-separated component expressions")
    group.add_argument("--builtin", help="builtin map name (see 'functions' catalog)")
    sp.add_argument("--n", type=int, help="dimension (required with --map)")


def _add_budget_argument(sp) -> None:
    sp.add_argument(
        "--budget",
        type=int,
        default=None,
        help=f"enumeration budget (default {DEFAULT_BUDGET}, or ${BUDGET_ENV})",
    )


def build_parser() -> _Parser:
    p = _Parser(prog="stringchase", description="Combinatorial fixed-point solver on [0,1]^n.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="refine the grid until a fixed-point residual is met")
    _add_map_arguments(sp)
    sp.add_argument("--tol", type=float, default=1e-6, help="residual tolerance (sup norm)")
    sp.add_argument("--initial-m", type=int, default=2, help="starting resolution")
    sp.add_argument("--growth", type=int, default=2, help="resolution multiplier")
    sp.add_argument("--max-m", type=int, default=2 ** 16, help="resolution cap")
    sp.add_argument("--engine", choices=["path", "oracle"], default="path")
    fmt = sp.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json", default="json")
    fmt.add_argument("--csv", dest="format", action="store_const", const="csv",
                     help="print the per-resolution history as CSV instead of JSON")
    _add_budget_argument(sp)
    sp.add_argument("--record", help="write a RunRecord JSON file with provenance")
    sp.set_defaults(handler=cmd_solve)

    sp = sub.add_parser("verify-parity", help="exhaustively check oddness and the double count")
    _add_map_arguments(sp)
    sp.add_argument("--m", type=int, required=True, help="grid resolution")
    _add_budget_argument(sp)
    sp.add_argument("--record", help="write a RunRecord JSON file with provenance")
    sp.set_defaults(handler=cmd_verify_parity)

    sp = sub.add_parser("trace", help="emit the door-in/door-out walk at a fixed resolution")
    _add_map_arguments(sp)
    sp.add_argument("--m", type=int, required=True, help="grid resolution")
    sp.add_argument("--svg", help="also render the walk to this SVG file (n=2 only)")
    sp.add_argument("--record", help="write a RunRecord JSON file with provenance")
    sp.set_defaults(handler=cmd_trace)

    sp = sub.add_parser("labels", help="dump every grid point's label as CSV")
    _add_map_arguments(sp)
    sp.add_argument("--m", type=int, required=True, help="grid resolution")
    _add_budget_argument(sp)
    sp.set_defaults(handler=cmd_labels)

    return p


def _resolve_map(args) -> MapFn:
    if args.builtin is not None:
        g = builtin(args.builtin)
        if args.n is not None and args.n != g.n:
            raise UsageError(f"--n {args.n} does not match builtin {args.builtin!r} (n={g.n})")
        return g
    if args.n is None:
        raise UsageError("--n is required with --map")
    return parse(args.map, args.n).as_map_fn(name=args.map)


def _resolve_budget(args) -> int:
    if getattr(args, "budget", None) is not None:
        return args.budget
    env = os.environ.get(BUDGET_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"${BUDGET_ENV} must be an integer, got {env!r}") from None
    return DEFAULT_BUDGET


def cmd_solve(args) -> int:
    g = _resolve_map(args)
    cfg = SolveConfig(
        initial_m=args.initial_m,
        growth=args.growth,
        max_m=args.max_m,
        tol=args.tol,
        engine=args.engine,
        budget=_resolve_budget(args),
    )
    report = solve(g, cfg)
    payload = solve_report_payload(report)
    if args.format == "csv":
        lines = ["m,residual,diameter,evals"]
        lines += [
            f"{h.m},{fmt_float(h.residual)},{fmt_float(h.diameter)},{h.evals}"
            for h in report.history
        ]
        print("\n".join(lines))
    else:
        print(dump_json(payload))
    _write_record(args, payload)
    return EXIT_OK if report.converged else EXIT_CHECK_FAILED


def cmd_verify_parity(args) -> int:
    g = _resolve_map(args)
    spec = GridSpec(g.n, args.m)
    lab = Labeling(spec, g)
    report = parity_check(spec, lab, budget=_resolve_budget(args))
    payload = parity_payload(report)
    print(dump_json(payload))
    _write_record(args, payload)
    return EXIT_OK if report.ok else EXIT_CHECK_FAILED


def cmd_trace(args) -> int:
    g = _resolve_map(args)
    if args.svg is not None and g.n != 2:
        raise SvgUnsupportedDimension(f"--svg requires n=2, got n={g.n}")
    spec = GridSpec(g.n, args.m)
    lab = Labeling(spec, g)
    _, trace = path_follow(spec, lab)
    payload = trace_payload(trace)
    print(dump_json(payload))
    if args.svg is not None:
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(trace_svg(spec, lab, trace))
    _write_record(args, payload)
    return EXIT_OK


def cmd_labels(args) -> int:
    g = _resolve_map(args)
    spec = GridSpec(g.n, args.m)
    budget = _resolve_budget(args)
    if spec.point_count > budget:
        raise BudgetExceeded(spec.point_count, budget)
    lab = Labeling(spec, g)
    n = spec.n
    header = [f"i{j}" for j in range(1, n + 1)] + [f"x{j}" for j in range(1, n + 1)] + ["label"]
    lines = [",".join(header)]
    for p in spec.points():
        real = spec.to_real(p)
        cells = [str(c) for c in p] + [fmt_float(x) for x in real] + [str(lab.label(p))]
        lines.append(",".join(cells))
    print("\n".join(lines))
    return EXIT_OK


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args._argv = argv
        return args.handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SvgUnsupportedDimension, ValueError) as exc:
        # parse errors, unknown builtins, bad configs and grid shapes
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (LabelingInvalid, StepLimitExceeded, MapEvaluationFailed) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
