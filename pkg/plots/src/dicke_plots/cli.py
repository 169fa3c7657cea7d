"""Command line entry point: plots <kind> --in <csv> [--in <csv>] --out <png>."""

import argparse
import sys

from .csvin import CsvFormatError
from .figures import KINDS, FigureSpec, MissingColumnError, NoDataError, render

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plots",
        description="Render dicke-g2 CSV sweep outputs as PNG figures.")
    parser.add_argument("kind", choices=KINDS)
    parser.add_argument("--in", dest="inputs", action="append", required=True,
                        metavar="CSV", help="input CSV (repeatable for "
                        "multi-panel bias-heatmap)")
    parser.add_argument("--out", required=True, metavar="PNG")
    parser.add_argument("--linear-y", action="store_true",
                        help="linear instead of logarithmic g2 axis")
    parser.add_argument("--title", default="")
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        spec = FigureSpec(kind=args.kind, inputs=args.inputs,
                          output=args.out, log_y=not args.linear_y,
                          title=args.title)
        path = render(spec)
    except (OSError, ValueError, KeyError) as exc:
        print(f"plots: {exc}", file=sys.stderr)
        if isinstance(exc, (CsvFormatError, MissingColumnError, NoDataError)):
            return EXIT_DATA
        return EXIT_USAGE
    print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
