"""Three-row comparison figure: time traces (left) and spectra (right).

One row per coupling strength; each left panel shows the ground-state
population from every solver column present in the trajectory CSV plus,
when the run metadata is available, the analytic uncoupled (g = 0) Rabi
reference.  Right panels show the same data in the frequency domain.
"""

import argparse
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .common import (
    FigureSpec,
    group_spectrum,
    load_columns,
    load_metadata,
    solver_columns,
    style_for,
)

STEMS = ("fig1_a", "fig1_b", "fig1_c")


def uncoupled_reference(times: np.ndarray, meta: dict) -> np.ndarray:
    eps = float(meta["model"]["epsilon"])
    delta = float(meta["model"]["delta"])
    wr = np.hypot(eps, delta)
    if wr == 0.0:
        return np.ones_like(times)
    return (eps ** 2 + delta ** 2 * (1.0 + np.cos(wr * times)) / 2.0) / wr ** 2


def build(spec: FigureSpec) -> None:
    spec.check_inputs()
    fig, axes = plt.subplots(len(STEMS), 2, figsize=(9, 7.5))
    for row, stem in enumerate(STEMS):
        traj = load_columns(spec.inputs[f"{stem}_trajectory"], required=("t",))
        spec_cols = load_columns(spec.inputs[f"{stem}_spectrum"],
                                 required=("angular_frequency", "amplitude",
                                           "solver"))
        t_ns = traj["t"] * 1e9
        ax_t, ax_f = axes[row]
        for tag, vals in solver_columns(traj, "rho00_").items():
            ax_t.plot(t_ns, vals, **style_for(tag))
        meta_path = spec.inputs.get(f"{stem}_metadata")
        label = stem
        if meta_path is not None and meta_path.exists():
            meta = load_metadata(meta_path)
            ax_t.plot(t_ns, uncoupled_reference(traj["t"], meta),
                      color="0.6", lw=0.8, ls=":", label="uncoupled")
            g = float(meta["model"]["g"])
            w = float(meta["model"]["omega"])
            label = f"g/ω = {g / w:g}"
        for tag, (freqs, amps) in group_spectrum(spec_cols).items():
            ax_f.plot(freqs / 1e9, amps, **style_for(tag))
        ax_t.set_ylabel(r"$\rho_{00}$")
        ax_t.set_ylim(-0.05, 1.05)
        ax_t.text(0.02, 0.06, label, transform=ax_t.transAxes)
        ax_f.set_xlim(0.0, 0.45)
        ax_f.set_ylabel("amplitude")
        if row == 0:
            ax_t.legend(loc="upper right", fontsize=7, ncol=2)
    axes[-1][0].set_xlabel("t (ns)")
    axes[-1][1].set_xlabel(r"$\omega$ (Grad/s)")
    fig.suptitle(spec.title or "population dynamics vs coupling strength")
    fig.tight_layout()
    fig.savefig(spec.output, dpi=150)
    plt.close(fig)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--in", dest="in_dir", required=True,
                    help="directory with the fig1_* CSV artifacts")
    ap.add_argument("--out", required=True, help="output image path")
    args = ap.parse_args(argv)
    in_dir = Path(args.in_dir)
    inputs = {}
    for stem in STEMS:
        inputs[f"{stem}_trajectory"] = in_dir / f"{stem}_trajectory.csv"
        inputs[f"{stem}_spectrum"] = in_dir / f"{stem}_spectrum.csv"
        inputs[f"{stem}_metadata"] = in_dir / f"{stem}_metadata.json"
    spec = FigureSpec(inputs=inputs, output=Path(args.out))
    # metadata is optional (reference curve only)
    for stem in STEMS:
        if not inputs[f"{stem}_metadata"].exists():
            del spec.inputs[f"{stem}_metadata"]
    build(spec)
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
