"""chaospic-plot: render figures from a run directory.

Exit codes: 0 success, 1 bad arguments, 2 missing/inconsistent artifacts.
"""

from __future__ import annotations

import argparse
import sys

from .artifacts import ArtifactError, load_run
from .plots import plot_convergence, plot_energy, plot_phase_space, plot_sod


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="chaospic-plot",
                                     description="figure rendering for solver run directories")
    sub = parser.add_subparsers(dest="kind", required=True)

    p_energy = sub.add_parser("energy", help="log mean/variance of the field energy")
    p_energy.add_argument("--rate", type=float, action="append", default=[],
                          help="exponential-rate guide line (repeatable)")

    p_phase = sub.add_parser("phase", help="phase-space mean/variance heatmaps")
    p_phase.add_argument("--time", type=float, action="append", default=None,
                         help="dump time to plot (default: all)")

    p_sod = sub.add_parser("sod", help="density/temperature profiles with bands")
    p_sod.add_argument("--ref", required=True, help="reference run directory")
    p_sod.add_argument("--time", type=float, default=None)

    sub.add_parser("converge", help="spectral-convergence decay")

    for p in sub.choices.values():
        p.add_argument("run_dir")
        p.add_argument("--out", default="figures")

    args = parser.parse_args(argv)
    try:
        artifacts = load_run(args.run_dir)
        if args.kind == "energy":
            written = plot_energy(artifacts, args.out, rate_guides=args.rate)
        elif args.kind == "phase":
            written = plot_phase_space(artifacts, args.out, times=args.time)
        elif args.kind == "sod":
            written = plot_sod(artifacts, load_run(args.ref), args.out, time=args.time)
        else:
            written = plot_convergence(artifacts, args.out)
    except ArtifactError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
