"""Console entry points: plot-thresholds INPUT.csv OUTPUT.svg and
plot-pe INPUT.csv RATES.csv OUTPUT.svg."""

from __future__ import annotations

import argparse
import sys

from .render import plot_pe_vs_ratio, plot_thresholds
from .schema import EmptyInputError, SchemaError


def main_thresholds(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="plot-thresholds",
                                     description="render C1/Cg/C2 threshold curves from a rates CSV")
    parser.add_argument("input_csv")
    parser.add_argument("output", help="output image (.svg or .png)")
    args = parser.parse_args(argv)
    try:
        plot_thresholds(args.input_csv, args.output)
    except (SchemaError, EmptyInputError, OSError, ValueError) as exc:
        print(f"plot-thresholds: {exc}", file=sys.stderr)
        return 1
    return 0


def main_pe(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="plot-pe",
                                     description="render error-rate sweeps with threshold markers")
    parser.add_argument("input_csv", help="sweep CSV")
    parser.add_argument("rates_csv", help="rates CSV providing the C1/C2 markers")
    parser.add_argument("output", help="output image (.svg or .png)")
    args = parser.parse_args(argv)
    try:
        plot_pe_vs_ratio(args.input_csv, args.rates_csv, args.output)
    except (SchemaError, EmptyInputError, OSError, ValueError) as exc:
        print(f"plot-pe: {exc}", file=sys.stderr)
        return 1
    return 0
