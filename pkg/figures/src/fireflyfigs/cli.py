"""Command-line entry point: render one figure from a result CSV."""

import argparse
import sys

from .figures import FIGURE_KINDS, SUCCESS_BOUNDARY, FigureSpec, render


def build_parser():
    p = argparse.ArgumentParser(
        prog="fireflyfigs",
        description="Render figures from simulation sweep or trajectory CSVs.",
    )
    p.add_argument("kind", choices=FIGURE_KINDS)
    p.add_argument("input_csv", help="sweep results CSV (or trajectory CSV "
                                     "for amplitude-series)")
    p.add_argument("-o", "--output", required=True,
                   help="output image path (.png or .svg)")
    p.add_argument("--x-col", default="n_agents",
                   help="heatmap x-axis column (default: n_agents)")
    p.add_argument("--y-col", default="cycle_len",
                   help="heatmap y-axis column (default: cycle_len)")
    p.add_argument("--panel-col", default="sigma",
                   help="heatmap panel column (default: sigma)")
    p.add_argument("--value-col", default="success",
                   help="heatmap cell value column (default: success)")
    p.add_argument("--boundary", type=float, default=SUCCESS_BOUNDARY,
                   help=f"success boundary (default: {SUCCESS_BOUNDARY})")
    p.add_argument("--title", default="")
    p.add_argument("--dpi", type=int, default=150)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    spec = FigureSpec(
        input_csv=args.input_csv, kind=args.kind, output=args.output,
        x_col=args.x_col, y_col=args.y_col, panel_col=args.panel_col,
        value_col=args.value_col, boundary=args.boundary,
        title=args.title, dpi=args.dpi,
    )
    try:
        out = render(spec)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
