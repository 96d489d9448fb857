"""Command line entry point: plot_roc."""

import argparse
import sys

from .figure import FigureSpec, PlotError, render_roc


def build_parser():
    parser = argparse.ArgumentParser(
        prog="plot_roc",
        description="Render panelled ROC curves from a scores CSV sweep.")
    parser.add_argument("--scores", action="append", required=True,
                        help="scores CSV (repeat to pool several files)")
    parser.add_argument("--by-panel", default="rho", choices=("rho", "s"),
                        help="variable that separates panels")
    parser.add_argument("--by-curve", default="s", choices=("rho", "s"),
                        help="variable that separates curves within a panel")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--sidecar",
                        help="run summary JSON; defaults to auc.json next to "
                             "the first scores file")
    parser.add_argument("--title", default="{panel}={value}",
                        help="panel title template")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = FigureSpec(scores=tuple(args.scores), out=args.out,
                          panel=args.by_panel, curve=args.by_curve,
                          sidecar=args.sidecar, title=args.title)
        path = render_roc(spec)
    except PlotError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
