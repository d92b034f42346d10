"""The ``plotgen`` command-line interface.

Exit codes: 0 success, 2 bad recipe/arguments, 3 bad input data.
"""
from __future__ import annotations

import argparse
import sys

from . import __version__
from .csvio import PlotgenError
from .render import available_figures, load_recipe, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plotgen",
        description="Render cbs-sim CSV outputs as multi-panel figures",
    )
    parser.add_argument("--version", action="version", version=f"plotgen {__version__}")
    parser.add_argument(
        "--figure", required=True,
        help=f"figure id, or 'all' (available: {', '.join(available_figures())})",
    )
    parser.add_argument("--in", dest="in_dir", required=True, metavar="DIR",
                        help="directory containing the input CSVs")
    parser.add_argument("--out", dest="out_dir", required=True, metavar="DIR",
                        help="directory for the rendered images")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    figures = available_figures() if args.figure == "all" else [args.figure]
    try:
        recipes = [load_recipe(fid) for fid in figures]
    except PlotgenError as exc:
        print(f"recipe error: {exc}", file=sys.stderr)
        return 2
    try:
        for recipe in recipes:
            path = render(recipe, args.in_dir, args.out_dir)
            print(path)
    except PlotgenError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
