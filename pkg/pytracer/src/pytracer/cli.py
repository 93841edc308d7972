"""Command line: pytracer run <script> --include <pkg> ... -o raw.json"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .tracer import TraceConfig, TraceError, trace_script


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pytracer",
        description="Record the dataflow of a Python script as a raw flow graph.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("run", help="run a script under the tracer")
    p.add_argument("script")
    p.add_argument("--include", action="append", default=[], metavar="PKG",
                   help="package prefix to trace (repeatable, at least one)")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--no-values", action="store_true",
                   help="do not record observed values on wires")
    p.add_argument("--record-nested", action="store_true",
                   help="also record calls nested inside traced calls")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if not args.include:
        print("error: at least one --include package is required", file=sys.stderr)
        return 2
    if not Path(args.script).exists():
        print(f"error: no such script: {args.script}", file=sys.stderr)
        return 2
    cfg = TraceConfig(
        script=Path(args.script),
        include_packages=args.include,
        output=Path(args.output),
        value_capture="none" if args.no_values else "literals-only",
        record_nested=args.record_nested,
    )
    try:
        trace_script(cfg)
    except TraceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
