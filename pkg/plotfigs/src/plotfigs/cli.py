"""Command-line front end: `plot --kind <kind> --in <csv> --out <png>`.

`--dump` prints the plotted series as CSV (for verifying the figure is a
pure data passthrough) instead of, or in addition to, writing the image.
Exit codes: 0 success, 1 schema/validation error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import dump_series, render
from .schema import KINDS, FigureSpec, SchemaError, load_rows


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="plot",
        description="render harness CSVs into figures",
    )
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument("--in", dest="source", required=True, type=Path,
                        help="input CSV path")
    parser.add_argument("--out", dest="output", type=Path,
                        help="output image path (omit with --dump to only dump)")
    parser.add_argument("--dump", action="store_true",
                        help="print the plotted series as CSV")
    args = parser.parse_args(argv)

    if args.output is None and not args.dump:
        parser.error("--out is required unless --dump is given")

    try:
        if args.dump:
            rows = load_rows(args.source, args.kind)
            sys.stdout.write(dump_series(args.kind, rows))
        if args.output is not None:
            render(FigureSpec(kind=args.kind, source=args.source, output=args.output))
    except (SchemaError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
