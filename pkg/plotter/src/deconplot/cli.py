"""Command-line figure renderer for harness result CSVs."""

import argparse
import sys

from . import PlotSpec, SchemaError, render


def build_parser():
    parser = argparse.ArgumentParser(
        prog="decon-plot",
        description="Render a harness result CSV into a figure",
    )
    parser.add_argument(
        "--input", action="append", required=True,
        help="result CSV; repeat to overlay several files",
    )
    parser.add_argument("--metric", choices=("err_db", "rate"), required=True)
    parser.add_argument("--out", required=True, help="output image path (.svg/.pdf/.png)")
    parser.add_argument("--stat", choices=("mean", "median"), default="mean",
                        help="statistic column for err_db (default mean)")
    parser.add_argument("--title", default="")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    spec = PlotSpec(
        inputs=tuple(args.input),
        metric=args.metric,
        output=args.out,
        statistic=args.stat,
        title=args.title,
    )
    try:
        path = render(spec)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
