"""Standalone figure renderer: ``figs <kind> <csv> <out>``."""

from __future__ import annotations

import argparse
import sys

from .plots import PLOTTERS, CsvContractError, PlotSpec, render


def main(argv=None) -> int:
    p = argparse.ArgumentParser(prog="figs", description=__doc__)
    p.add_argument("kind", choices=sorted(PLOTTERS))
    p.add_argument("csv")
    p.add_argument("out", help="output image path (.png or .svg)")
    p.add_argument("--title", default="")
    p.add_argument("--xlabel", default="")
    p.add_argument("--ylabel", default="n_D")
    p.add_argument("--loglog", action="store_true")
    try:
        args = p.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 2
    spec = PlotSpec(args.csv, args.kind, args.out, args.title, args.xlabel,
                    args.ylabel, args.loglog)
    try:
        render(spec)
    except (CsvContractError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
