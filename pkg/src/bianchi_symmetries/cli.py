"""Command-line front end: ``analyze``, ``range`` and ``paper-check``."""

from __future__ import annotations

import argparse
import logging
import sys
from typing import List, Optional

from .classgroup import ExcludedFieldError, InvalidInputError
from .report import analyze, emit, emit_fixtures, paper_check, range_scan
from .symmetries import SearchConfig

FORMATS = ("pretty", "json", "csv")


def _search_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--c-max", type=int, default=12, help="largest c tried in the search (default 12)")
    p.add_argument("--slack", type=int, default=1, help="widening of the fundamental rectangle (default 1)")
    p.add_argument("--format", choices=FORMATS, default="pretty")
    p.add_argument("--strict", action="store_true", help="exit 1 when any diagnostic is emitted")
    p.add_argument("--approx", action="store_true", help="add a floating-point annotation column")
    p.add_argument("--skip-character-conditions", action="store_true",
                   help="do not filter m by the quadratic character conditions")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bianchi-symmetries",
        description="Class groups, singular cusps and anti-holomorphic symmetries of Bianchi orbifolds.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="analyze a single field Q(sqrt(-D))")
    p.add_argument("--d", type=int, required=True, dest="D")
    _search_options(p)

    p = sub.add_parser("range", help="analyze every square-free D in an interval")
    p.add_argument("--from", type=int, required=True, dest="D_from")
    p.add_argument("--to", type=int, required=True, dest="D_to")
    p.add_argument("--workers", type=int, default=1)
    _search_options(p)

    p = sub.add_parser("paper-check", help="re-verify the worked examples")
    p.add_argument("--format", choices=FORMATS, default="pretty")
    return parser


def _config(args) -> SearchConfig:
    return SearchConfig(
        c_max=args.c_max,
        rectangle_slack=args.slack,
        strict=args.strict,
        enforce_character_conditions=not args.skip_character_conditions,
    )


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")

    if args.command == "paper-check":
        results = paper_check()
        sys.stdout.write(emit_fixtures(results, args.format))
        return 0 if all(r.passed for r in results) else 1

    try:
        cfg = _config(args)
        if args.command == "analyze":
            reports = [analyze(args.D, cfg)]
            summary = None
        else:
            if args.workers < 1:
                raise InvalidInputError("--workers must be at least 1")
            result = range_scan(args.D_from, args.D_to, cfg, args.workers)
            reports = list(result.reports)
            summary = result.summary()
    except (InvalidInputError, ExcludedFieldError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    sys.stdout.write(emit(reports, args.format, args.approx, summary))
    if args.strict and any(r.diagnostics for r in reports):
        return 1
    return 0
