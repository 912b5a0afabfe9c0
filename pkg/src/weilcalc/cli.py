"""Command-line runner: ``check``, ``suite`` and ``bracket``.

Exit codes: 0 when every record passes, 1 when any record fails or errors,
2 for unreadable input (missing file, syntax error, unknown field name).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from .dsl import CheckStmt, FieldDecl, Script, ScriptError, parse_script, run_checks
from .report import Report
from .suite import GROUPS, run_suite

EXIT_INPUT = 2


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}")
    except UnicodeDecodeError as exc:
        raise InputError(f"{path}: not UTF-8 ({exc.reason})")


def _parse(path: str) -> Script:
    text = _read(path)
    try:
        return parse_script(text)
    except ScriptError as exc:
        raise InputError(f"{path}:{exc.line}:{exc.column}: {exc.message}")


def cmd_check(args) -> Report:
    script = _parse(args.file)
    return run_checks(script, Path(args.file).name)


def cmd_suite(args) -> Report:
    try:
        return run_suite(args.section, seed=args.seed, trials=args.trials, dim=args.dim,
                         degree=args.degree)
    except ValueError as exc:
        raise InputError(str(exc))


def cmd_bracket(args) -> Report:
    script = _parse(args.file)
    fields = [s for s in script.statements if isinstance(s, FieldDecl)]
    names = {f.name for f in fields}
    for n in (args.x, args.y):
        if n not in names:
            raise InputError(f"{args.file}: no field named {n!r}")
    pos = next(f.pos for f in fields if f.name == args.x)
    only = Script(tuple(fields) + (CheckStmt("bracket", (args.x, args.y), pos=pos),))
    return run_checks(only, Path(args.file).name)


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS,
                     help="report format (default: text)")

    p = argparse.ArgumentParser(prog="weilcalc", parents=[fmt],
                                description="Exact verification of Weil-algebra diagrams and microflow identities.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[fmt], help="run the checks in a .weil script")
    c.add_argument("file")
    c.set_defaults(run=cmd_check)

    s = sub.add_parser("suite", parents=[fmt], help="run the bundled verification suite")
    s.add_argument("--section", choices=sorted(GROUPS) + ["all"], default="all",
                   help="3 tangent spaces, 4 flows and brackets, 5 strong differences, 6 vector fields")
    s.add_argument("--trials", type=int, default=10, help="random trials per property (default 10)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--dim", type=int, default=None, help="fix the model dimension k instead of cycling")
    s.add_argument("--degree", type=int, default=2, help="maximal degree of random coefficients")
    s.set_defaults(run=cmd_suite)

    b = sub.add_parser("bracket", parents=[fmt], help="bracket two fields declared in a script")
    b.add_argument("--file", required=True)
    b.add_argument("--x", required=True, metavar="NAME")
    b.add_argument("--y", required=True, metavar="NAME")
    b.set_defaults(run=cmd_bracket)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    fmt = getattr(args, "format", "text")
    try:
        report = args.run(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(report.to_json() if fmt == "json" else report.to_text())
    return report.exit_code()


if __name__ == "__main__":
    sys.exit(main())
