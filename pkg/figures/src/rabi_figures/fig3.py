"""Thermometry figure: recovered vs true temperature with two insets.

Main panel: T_out against T_in (blue) with the ideal diagonal and a red
band showing the temperature error propagated from a fixed
frequency-measurement error.  Insets: the absolute round-trip error
across the sweep, and the dressed frequency against temperature from the
sensitivity CSV.
"""

import argparse
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .common import FigureSpec, load_columns


def build(spec: FigureSpec) -> None:
    spec.check_inputs()
    sweep = load_columns(
        spec.inputs["thermometry"],
        required=("T_in_mK", "T_out_mK", "abs_err_mK", "T_err_from_10kHz"))
    sens = load_columns(spec.inputs["sensitivity"],
                        required=("T_mK", "Omega_rad_s"))

    fig, ax = plt.subplots(figsize=(7.0, 5.5))
    t_in, t_out = sweep["T_in_mK"], sweep["T_out_mK"]
    band = 1e3 * sweep["T_err_from_10kHz"]
    ax.plot(t_in, t_in, color="0.6", lw=0.8, label="ideal")
    ax.fill_between(t_in, t_out - band, t_out + band, color="tab:red",
                    alpha=0.25, label="propagated frequency error")
    ax.plot(t_in, t_out, color="tab:blue", marker="o", ms=3,
            label="recovered")
    ax.set_xlabel(r"$T_{\mathrm{in}}$ (mK)")
    ax.set_ylabel(r"$T_{\mathrm{out}}$ (mK)")
    ax.legend(loc="upper left", fontsize=8)
    fig.suptitle(spec.title or "thermometry round trip")

    ax_e = ax.inset_axes([0.62, 0.10, 0.33, 0.28])
    ax_e.plot(t_in, sweep["abs_err_mK"], color="tab:blue", marker=".")
    ax_e.set_xlabel(r"$T_{\mathrm{in}}$ (mK)", fontsize=7)
    ax_e.set_ylabel(r"$|T_{\mathrm{out}}-T_{\mathrm{in}}|$ (mK)", fontsize=7)
    ax_e.tick_params(labelsize=6)

    ax_w = ax.inset_axes([0.62, 0.47, 0.33, 0.22])
    ax_w.plot(sens["T_mK"], sens["Omega_rad_s"], color="tab:green")
    ax_w.set_xlabel("T (mK)", fontsize=7)
    ax_w.set_ylabel(r"$\Omega$ (rad/s)", fontsize=7)
    ax_w.tick_params(labelsize=6)

    fig.savefig(spec.output, dpi=150)
    plt.close(fig)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--in", dest="in_dir", required=True,
                    help="directory with the fig3_* CSV artifacts")
    ap.add_argument("--out", required=True, help="output image path")
    args = ap.parse_args(argv)
    in_dir = Path(args.in_dir)
    spec = FigureSpec(
        inputs={
            "thermometry": in_dir / "fig3_thermometry.csv",
            "sensitivity": in_dir / "fig3_sensitivity.csv",
        },
        output=Path(args.out),
    )
    build(spec)
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
