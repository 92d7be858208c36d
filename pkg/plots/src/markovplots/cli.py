"""Command line entry point: ``markovlab-plots KIND --in a.csv [b.csv ...] --out fig.png``."""

from __future__ import annotations

import argparse
import sys

from .render import KINDS, PlotSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="markovlab-plots",
        description="Render figures from markovlab CSV artifacts.",
    )
    parser.add_argument("kind", choices=KINDS)
    parser.add_argument(
        "--in", dest="inputs", nargs="+", required=True, help="input CSV paths"
    )
    parser.add_argument("--out", required=True, help="output image path")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        render(PlotSpec(tuple(args.inputs), args.kind, args.out))
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
