"""Command-line entry point: plot --in cmp.csv --out fig1.png."""

import argparse
import sys

from .plotting import EmptyCsvError, PlotSpec, SchemaError, render_comparison


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plot", description="Render grouped iteration-count bar charts"
    )
    parser.add_argument("--in", dest="input_csv", required=True,
                        help="results CSV from the learning harness")
    parser.add_argument("--out", dest="output_image", required=True,
                        help="output image path (png, svg, pdf, ...)")
    parser.add_argument("--threshold", type=float,
                        help="keep only rows with this success threshold")
    parser.add_argument("--modes",
                        help="comma-separated modes to include, e.g. "
                             "optimized,baseline-search")
    parser.add_argument("--title", default="Iterations to convergence per Hamiltonian")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = PlotSpec(
        input_csv=args.input_csv,
        output_image=args.output_image,
        threshold=args.threshold,
        modes=tuple(args.modes.split(",")) if args.modes else None,
        title=args.title,
    )
    try:
        path = render_comparison(spec)
    except (SchemaError, EmptyCsvError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # internal fault
        print(f"internal error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
