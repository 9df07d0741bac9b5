"""Command-line entry point: ``cisupport run | audit-all | parse --check``."""

from __future__ import annotations

import argparse
import os
import sys

from ..errors import ParseError, ScriptNameError
from ..support import MUTATIONS
from .audit import audit_all
from .config import RunConfig
from .lang import parse, print_script
from .session import EXIT_USAGE, run, to_json, to_table_row

_COLORS = {"PASS": "32", "FAIL": "31", "INAPPLICABLE": "33", "WINDOW-LIMITED": "36"}


def _color_on() -> bool:
    return os.environ.get("CISUPPORT_COLOR", "").lower() in ("1", "always", "true", "yes")


def _emit(reports, fmt: str, out) -> None:
    color = fmt == "table" and _color_on()
    for rep in reports:
        line = to_json(rep) if fmt == "json" else to_table_row(rep)
        if color and rep.get("verdict") in _COLORS:
            line = f"\x1b[{_COLORS[rep['verdict']]}m{line}\x1b[0m"
        out.write(line + "\n")


def _config_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--p", type=int, help="prime field size (overrides the script)")
    p.add_argument("--window", type=int, help="resolution window, at least 2c+2 (default 2c+10)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.add_argument("--strict", action="store_true", help="treat unstabilized supports as errors")
    p.add_argument("--attempts", type=int, default=12, help="complexity-reduction attempt budget")
    p.add_argument("--budget", type=int, help="cap on stored resolution terms")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cisupport", description="Support varieties over complete intersections.")
    sub = ap.add_subparsers(dest="cmd", required=True)
    r = sub.add_parser("run", help="execute a session script")
    r.add_argument("script")
    _config_args(r)
    a = sub.add_parser("audit-all", help="fixture suite and random sweep through every auditor")
    _config_args(a)
    a.add_argument("--random", type=int, default=3, help="random modules per fixture ring")
    a.add_argument("--fixtures", nargs="+", choices=("F1", "F2", "F3"), default=["F1", "F2", "F3"])
    a.add_argument("--mutate", choices=MUTATIONS, help="deliberately break a component (harness self-test)")
    c = sub.add_parser("parse", help="syntax-check a script")
    c.add_argument("--check", action="store_true", required=True)
    c.add_argument("--print", action="store_true", help="print the normalized script")
    c.add_argument("script")
    return ap


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.cmd == "parse":
            s = parse(_read(args.script))
            if args.print:
                sys.stdout.write(print_script(s))
            return 0
        cfg = RunConfig(p=args.p, window=args.window, strict=args.strict, attempts=args.attempts,
                        budget=args.budget, seed=args.seed, format=args.format,
                        random_per_ring=getattr(args, "random", 3))
        if args.cmd == "run":
            reports, code = run(parse(_read(args.script)), cfg)
        else:
            reports, code = audit_all(cfg, tuple(args.fixtures), args.mutate)
    except (ParseError, ScriptNameError, OSError, ValueError) as exc:
        kind = "NameError" if isinstance(exc, ScriptNameError) else type(exc).__name__
        sys.stderr.write(f"cisupport: {kind}: {exc}\n")
        return EXIT_USAGE
    _emit(reports, cfg.format, sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
