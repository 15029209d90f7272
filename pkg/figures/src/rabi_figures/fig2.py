"""Asymmetric-regime figure: population dynamics with two insets.

Main panel: the ground-state population from every solver column in the
trajectory CSV.  Upper inset: the frequency-domain view (two dominant
lines in this regime).  Lower inset: the numerical weight of each series
harmonic as a bar chart.
"""

import argparse
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .common import (
    FigureSpec,
    group_spectrum,
    load_columns,
    solver_columns,
    style_for,
)


def build(spec: FigureSpec) -> None:
    spec.check_inputs()
    traj = load_columns(spec.inputs["trajectory"], required=("t",))
    spec_cols = load_columns(spec.inputs["spectrum"],
                             required=("angular_frequency", "amplitude",
                                       "solver"))
    weights = load_columns(spec.inputs["weights"], required=("n", "c_n"))

    fig, ax = plt.subplots(figsize=(7.0, 5.0))
    for tag, vals in solver_columns(traj, "rho00_").items():
        ax.plot(traj["t"], vals, **style_for(tag))
    ax.set_xlabel("t")
    ax.set_ylabel(r"$\rho_{00}$")
    ax.set_ylim(-0.05, 1.05)
    ax.legend(loc="lower right", fontsize=8)
    fig.suptitle(spec.title or "dynamics in the asymmetric regime")

    ax_f = ax.inset_axes([0.08, 0.10, 0.34, 0.30])
    for tag, (freqs, amps) in group_spectrum(spec_cols).items():
        ax_f.plot(freqs, amps, **style_for(tag))
    ax_f.set_xlim(0.0, 1.5)
    ax_f.set_xlabel(r"$\omega$", fontsize=7)
    ax_f.set_ylabel("amp", fontsize=7)
    ax_f.tick_params(labelsize=6)

    ax_w = ax.inset_axes([0.58, 0.10, 0.34, 0.30])
    ax_w.bar(weights["n"], weights["c_n"], width=0.8, color="tab:green")
    ax_w.set_xlabel("n", fontsize=7)
    ax_w.set_ylabel(r"$c_n$", fontsize=7)
    ax_w.tick_params(labelsize=6)

    fig.savefig(spec.output, dpi=150)
    plt.close(fig)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--in", dest="in_dir", required=True,
                    help="directory with the fig2_* CSV artifacts")
    ap.add_argument("--out", required=True, help="output image path")
    args = ap.parse_args(argv)
    in_dir = Path(args.in_dir)
    spec = FigureSpec(
        inputs={
            "trajectory": in_dir / "fig2_trajectory.csv",
            "spectrum": in_dir / "fig2_spectrum.csv",
            "weights": in_dir / "fig2_weights.csv",
        },
        output=Path(args.out),
    )
    build(spec)
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
