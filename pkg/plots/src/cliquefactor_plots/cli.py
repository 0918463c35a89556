"""Command line entry point for figure rendering."""

from __future__ import annotations

import argparse
import sys
from collections.abc import Sequence

from .render import CurveSpec, SchemaMismatch, render


def main(argv: Sequence[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="plots", description="Render threshold-scan CSV logs into figures."
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    sub = subparsers.add_parser("render", help="render one figure from a scan CSV")
    sub.add_argument("--in", dest="infile", required=True, help="scan CSV path")
    sub.add_argument("--group", choices=("n", "alpha"), default="n")
    sub.add_argument("--x", choices=("c",), default="c")
    sub.add_argument("--out", required=True, help="output image (.svg or .png)")
    args = parser.parse_args(argv)

    try:
        spec = CurveSpec(group=args.group, x=args.x)
        report = render(args.infile, spec, args.out)
    except SchemaMismatch as err:
        print(f"error: results file does not match the scan schema: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    if report.empty:
        print("warning: no records in input; wrote empty axes", file=sys.stderr)
    print(f"wrote {report.out_path} ({report.rows} rows, {len(report.cells)} curves)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
