"""Command-line entry point.

Subcommands: simulate | spectrum | thermometry | weights.  Everything is
driven by a config file; outputs are CSV plus a metadata JSON, written
atomically (write-then-rename), with floats at 17 significant digits so
identical configs produce byte-identical files.

Exit codes: 0 success, 2 config/parameter error, 3 numerical error, 4 I/O.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import __version__
from .config import RunConfig, load_config
from .core import ThermalOscillator, polaron_scalars, single_term_validity
from .correlation import stable_weights
from .dynamics import (effective_frequency, series_dynamics,
                       single_term_dynamics, spectrum)
from .errors import NumericalError, ParameterError
from .exact import QubitTrajectory, evolve_exact
from .thermometry import sensitivity_curve, thermometry_sweep


def _fmt(x) -> str:
    return f"{float(x):.17g}"


def _atomic_write(path: Path, write_fn) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            write_fn(fh)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path: Path, header, rows) -> None:
    def _write(fh):
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([c if isinstance(c, str) else _fmt(c) for c in row])
    _atomic_write(path, _write)


def _run_solvers(cfg: RunConfig) -> dict[str, QubitTrajectory]:
    osc = ThermalOscillator(cfg.params.omega, cfg.temperature, cfg.units)
    out: dict[str, QubitTrajectory] = {}
    for solver in cfg.solvers:
        if solver == "exact":
            out[solver] = evolve_exact(cfg.params, osc, cfg.times, dim=cfg.dim)
        elif solver == "single_term":
            out[solver] = single_term_dynamics(cfg.params, osc, cfg.times)
        elif solver == "series":
            out[solver] = series_dynamics(cfg.params, osc, cfg.times,
                                          n_max=cfg.n_max)
    return out


def _metadata(cfg: RunConfig) -> dict:
    osc = ThermalOscillator(cfg.params.omega, cfg.temperature, cfg.units)
    sc = polaron_scalars(cfg.params, osc)
    val = single_term_validity(sc)
    return {
        "version": __version__,
        "units": cfg.units.mode,
        "model": {
            "epsilon": cfg.params.epsilon,
            "delta": cfg.params.delta,
            "omega": cfg.params.omega,
            "g": cfg.params.g,
        },
        "temperature": cfg.temperature,
        "derived": {
            "alpha": sc.alpha,
            "N": sc.N,
            "b": sc.b,
            "z": sc.z,
            "Omega": effective_frequency(cfg.params, osc),
            "single_term_valid": val.valid,
            "validity_threshold": val.threshold,
        },
        "solvers": list(cfg.solvers),
        "n_max": cfg.n_max,
    }


def cmd_simulate(cfg: RunConfig, out_dir: Path, stem: str) -> None:
    if cfg.temperature is None:
        raise ParameterError("simulate needs a single temperature, not a grid")
    trajs = _run_solvers(cfg)
    header = ["t"]
    cols = [cfg.times]
    for name in cfg.solvers:
        tr = trajs[name]
        tag = "single" if name == "single_term" else name
        header += [f"rho00_{tag}", f"abs_rho10_{tag}"]
        cols += [tr.rho00, np.abs(tr.rho10)]
    write_csv(out_dir / f"{stem}_trajectory.csv", header, zip(*cols))
    _atomic_write(out_dir / f"{stem}_metadata.json",
                  lambda fh: json.dump(_metadata(cfg), fh, indent=2, sort_keys=True))


def cmd_spectrum(cfg: RunConfig | None, out_dir: Path, stem: str,
                 traj_csv: Path | None = None) -> None:
    rows = []
    if traj_csv is not None:
        with open(traj_csv, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            data = np.array([[float(c) for c in row] for row in reader])
        if not header or header[0] != "t":
            raise ParameterError(f"{traj_csv} lacks the documented 't' first column")
        times = data[:, 0]
        for j, col in enumerate(header[1:], start=1):
            if not col.startswith("rho00_"):
                continue
            tr = QubitTrajectory(times=times, rho00=data[:, j],
                                 rho10=np.zeros(times.size, complex),
                                 method=col[len("rho00_"):])
            freqs, amps = spectrum(tr)
            rows += [(f, a, tr.method) for f, a in zip(freqs, amps)]
    else:
        if cfg is None:
            raise ParameterError("spectrum needs a config or a trajectory CSV")
        for name, tr in _run_solvers(cfg).items():
            tag = "single" if name == "single_term" else name
            freqs, amps = spectrum(tr)
            rows += [(f, a, tag) for f, a in zip(freqs, amps)]
    write_csv(out_dir / f"{stem}_spectrum.csv",
              ["angular_frequency", "amplitude", "solver"], rows)


def cmd_thermometry(cfg: RunConfig, out_dir: Path, stem: str) -> None:
    if cfg.temperature_grid is None:
        raise ParameterError("thermometry needs a temperature grid")
    results = thermometry_sweep(
        cfg.params, cfg.temperature_grid,
        n_points=cfg.thermometry_n_points, dt=cfg.thermometry_dt,
        dim=cfg.dim, bracket=cfg.thermometry_bracket, units=cfg.units,
        freq_error=cfg.freq_error,
    )
    write_csv(
        out_dir / f"{stem}_thermometry.csv",
        ["T_in_mK", "omega_fit_rad_s", "T_out_mK", "abs_err_mK",
         "dOmega_dT", "T_err_from_10kHz"],
        [(r.T_in * 1e3, r.omega_fit, r.T_out * 1e3, r.abs_error * 1e3,
          r.dOmega_dT, r.T_uncertainty_from_df) for r in results],
    )
    curve = sensitivity_curve(cfg.params, cfg.temperature_grid, cfg.units)
    write_csv(out_dir / f"{stem}_sensitivity.csv",
              ["T_mK", "Omega_rad_s", "dOmega_dT"],
              [(t * 1e3, om, sl) for t, om, sl in curve])


def cmd_weights(cfg: RunConfig, out_dir: Path, stem: str) -> None:
    if cfg.temperature is None:
        raise ParameterError("weights needs a single temperature, not a grid")
    osc = ThermalOscillator(cfg.params.omega, cfg.temperature, cfg.units)
    series = stable_weights(polaron_scalars(cfg.params, osc), osc.beta_omega,
                            cfg.n_max, omega=cfg.params.omega)
    write_csv(out_dir / f"{stem}_weights.csv", ["n", "c_n"],
              [(str(int(n)), c) for n, c in zip(series.orders, series.coefficients)])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rabi-thermo",
        description="Qubit-oscillator dynamics and ac-Stark-shift thermometry",
    )
    parser.add_argument("command",
                        choices=["simulate", "spectrum", "thermometry", "weights"])
    parser.add_argument("trajectory_csv", nargs="?", default=None,
                        help="for spectrum: existing trajectory CSV to transform")
    parser.add_argument("--config", required=False, help="path to run config")
    parser.add_argument("--out", default="out", help="output directory")
    parser.add_argument("--solvers", default=None,
                        help="comma-separated solver list override")
    parser.add_argument("--nmax", type=int, default=None,
                        help="series truncation override")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = None
        stem = "run"
        if args.config:
            cfg = load_config(args.config, solvers_override=args.solvers,
                              n_max_override=args.nmax)
            stem = Path(args.config).stem
        out_dir = Path(args.out)
        if args.command == "simulate":
            if cfg is None:
                raise ParameterError("simulate requires --config")
            cmd_simulate(cfg, out_dir, stem)
        elif args.command == "spectrum":
            traj = Path(args.trajectory_csv) if args.trajectory_csv else None
            if traj is not None:
                stem = traj.stem.removesuffix("_trajectory")
            cmd_spectrum(cfg, out_dir, stem, traj_csv=traj)
        elif args.command == "thermometry":
            if cfg is None:
                raise ParameterError("thermometry requires --config")
            cmd_thermometry(cfg, out_dir, stem)
        elif args.command == "weights":
            if cfg is None:
                raise ParameterError("weights requires --config")
            cmd_weights(cfg, out_dir, stem)
    except (ParameterError, FileNotFoundError) as exc:
        if isinstance(exc, FileNotFoundError):
            print(f"error: {exc}", file=sys.stderr)
            return 4
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
