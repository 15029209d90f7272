#!/usr/bin/env python3
"""Regenerate every CSV artifact the figure scripts consume.

Runs the CLI on each shipped config: trajectories + spectra for the three
coupling strengths and the natural-unit series run, the series weight table,
and the thermometry sweep.  Output lands in --out (default ./out).
"""

import argparse
import sys
from pathlib import Path

from rabi_thermo.cli import main as cli_main

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


def run(argv):
    code = cli_main(argv)
    if code != 0:
        sys.exit(code)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="out")
    args = ap.parse_args()
    for name in ("fig1_a", "fig1_b", "fig1_c", "fig2"):
        cfg = str(CONFIG_DIR / f"{name}.cfg")
        print(f"simulate {name}")
        run(["simulate", "--config", cfg, "--out", args.out])
        run(["spectrum", "--config", cfg, "--out", args.out])
    print("weights fig2")
    run(["weights", "--config", str(CONFIG_DIR / "fig2.cfg"), "--out", args.out])
    print("thermometry fig3 (takes a minute)")
    run(["thermometry", "--config", str(CONFIG_DIR / "fig3.cfg"), "--out", args.out])
    print(f"done; artifacts in {args.out}/")


if __name__ == "__main__":
    main()
