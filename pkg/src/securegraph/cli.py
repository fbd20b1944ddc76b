"""Command-line entry point.

Exit codes: 0 success, 1 negative verdict, 2 I/O, syntax or usage error.
"""

from __future__ import annotations

import argparse
import sys

from .classify import classify, format_classification
from .codes import BuildError, CodeFormatError, build, emit_code, parse_code
from .graph import GraphError, parse_graph
from .instances import BUNDLED, load_instance
from .structure import analyze, format_analysis
from .verify import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    exhaustive_converse_search,
    format_report,
    verify_code,
)


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_graph(path: str):
    return parse_graph(_read(path))


def cmd_analyze(args, out) -> int:
    g = _load_graph(args.graph)
    out.write(format_analysis(g, analyze(g)))
    return 0


def cmd_classify(args, out) -> int:
    r = classify(_load_graph(args.graph))
    out.write(format_classification(r))
    return 0 if r.positive else 1


def cmd_build(args, out) -> int:
    g = _load_graph(args.graph)
    code = build(g, mode=args.mode, seed=args.seed, q_override=args.q)
    text = emit_code(code)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise UsageError(f"cannot write {args.out}: {exc.strerror}") from None
    else:
        out.write(text)
    return 0


def cmd_verify(args, out) -> int:
    g = _load_graph(args.graph)
    code = parse_code(_read(args.code), g)
    report = verify_code(code, oracle=args.oracle, audit=args.audit, budget=args.budget)
    out.write(format_report(report))
    return 0 if report.valid else 1


def cmd_search(args, out) -> int:
    g = _load_graph(args.graph)
    code = exhaustive_converse_search(g, args.q, args.node_dim, args.zdim, budget=args.budget)
    if code is None:
        out.write("NONE\tno scalar linear code of this shape exists\n")
        return 1
    out.write(emit_code(code))
    return 0


DEMO_ORACLE_BUDGET = 10**5


def cmd_demo(args, out) -> int:
    # brute force only where it is quick; larger instances rely on the rank checks
    budget = min(args.budget, DEMO_ORACLE_BUDGET)
    for name in BUNDLED:
        g = load_instance(name)
        r = classify(g)
        line = f"{name}\tregime={r.regime.value}\tcapacity={r.capacity_text}"
        try:
            code = build(g, seed=args.seed)
        except BuildError as exc:
            out.write(f"{line}\tbuild=none\t({exc})\n")
            continue
        report = verify_code(code, oracle=True, audit=code.zdim > 0, budget=budget)
        rate = "unbounded" if code.rate is None else str(code.rate)
        out.write(f"{line}\tbuild={code.kind}\tq={code.q}\trate={rate}"
                  f"\toracle_skipped={len(report.oracle_skipped)}"
                  f"\t{'VALID' if report.valid else 'INVALID'}\n")
    return 0


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    p = argparse.ArgumentParser(prog="securegraph", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("analyze", parents=[common])
    s.add_argument("graph")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("classify", parents=[common])
    s.add_argument("graph")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("build", parents=[common])
    s.add_argument("graph")
    s.add_argument("--mode", choices=["auto", "m1", "general", "keyless"], default="auto")
    s.add_argument("--q", type=int, default=None)
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_build)

    s = sub.add_parser("verify", parents=[common])
    s.add_argument("code")
    s.add_argument("graph")
    s.add_argument("--oracle", action="store_true")
    s.add_argument("--audit", action="store_true")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("search-converse", parents=[common])
    s.add_argument("graph")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--node-dim", type=int, required=True)
    s.add_argument("--zdim", type=int, required=True)
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("demo", parents=[common])
    s.set_defaults(func=cmd_demo)
    return p


def run(argv, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        if args.budget <= 0:
            raise UsageError("--budget must be positive")
        if getattr(args, "node_dim", 1) < 1 or getattr(args, "zdim", 0) < 0:
            raise UsageError("--node-dim must be >= 1 and --zdim >= 0")
        return args.func(args, out)
    except BuildError as exc:
        err.write(f"error: {' '.join(str(exc).split())}\n")
        return 1
    except (UsageError, GraphError, CodeFormatError, BudgetExceeded, ValueError) as exc:
        msg = " ".join(str(exc).split())
        err.write(f"error: {msg}\n")
        return 2


def main(argv=None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
