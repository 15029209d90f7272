"""Run configuration: INI-style file with the sections documented in the
README (units / model / temperature / solvers / time / truncation /
thermometry / output)."""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field

import numpy as np

from .core import NATURAL, PHYSICAL, RabiParams, UnitSystem
from .errors import ParameterError

KNOWN_SOLVERS = ("exact", "single_term", "series")


@dataclass(frozen=True)
class RunConfig:
    units: UnitSystem
    params: RabiParams
    temperature: float | None
    temperature_grid: np.ndarray | None
    solvers: tuple[str, ...]
    n_max: int
    times: np.ndarray
    dim: int | None
    thermometry_bracket: tuple[float, float]
    thermometry_n_points: int
    thermometry_dt: float
    freq_error: float
    seed: int = 0  # reserved; all computation deterministic

    def __post_init__(self):
        if (self.temperature is None) == (self.temperature_grid is None):
            raise ParameterError(
                "exactly one of temperature value and temperature grid required"
            )
        for s in self.solvers:
            if s not in KNOWN_SOLVERS:
                raise ParameterError(f"unknown solver {s!r}; choose from {KNOWN_SOLVERS}")
        if not self.solvers:
            raise ParameterError("solver list must not be empty")
        if self.n_max < 0:
            raise ParameterError("n_max must be non-negative")


def _get(cp, section, key, default=None):
    if cp.has_option(section, key):
        return cp.get(section, key)
    return default


def _getfloat(cp, section, key, default=None, required=False):
    raw = _get(cp, section, key)
    if raw is None:
        if required:
            raise ParameterError(f"missing required option [{section}] {key}")
        return default
    try:
        return float(raw)
    except ValueError as exc:
        raise ParameterError(f"option [{section}] {key} = {raw!r} is not a number") from exc


def load_config(path, solvers_override=None, n_max_override=None) -> RunConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    read = cp.read(path)
    if not read:
        raise FileNotFoundError(f"config file not found: {path}")

    mode = _get(cp, "units", "mode", "physical")
    units = NATURAL if mode == "natural" else PHYSICAL if mode == "physical" else None
    if units is None:
        raise ParameterError(f"[units] mode must be natural or physical, got {mode!r}")

    params = RabiParams(
        epsilon=_getfloat(cp, "model", "epsilon", required=True),
        delta=_getfloat(cp, "model", "delta", required=True),
        omega=_getfloat(cp, "model", "omega", required=True),
        g=_getfloat(cp, "model", "g", required=True),
    )

    temperature = _getfloat(cp, "temperature", "value")
    grid_raw = _get(cp, "temperature", "grid")
    grid = None
    if grid_raw is not None:
        try:
            start, stop, step = (float(x) for x in grid_raw.split(","))
        except ValueError as exc:
            raise ParameterError(
                "[temperature] grid must be start,stop,step"
            ) from exc
        if step <= 0 or stop < start:
            raise ParameterError("[temperature] grid must ascend with positive step")
        n = int(math.floor((stop - start) / step + 0.5)) + 1
        grid = start + step * np.arange(n)

    solvers_raw = solvers_override or _get(cp, "solvers", "methods", "exact,single_term")
    solvers = tuple(s.strip() for s in solvers_raw.split(",") if s.strip())
    n_max = n_max_override
    if n_max is None:
        n_max = int(_getfloat(cp, "solvers", "n_max", 10))

    dt = _getfloat(cp, "time", "dt")
    if dt is not None:
        n_points = int(_getfloat(cp, "time", "n_points", required=True))
        times = np.arange(n_points) * dt
    else:
        t_end = _getfloat(cp, "time", "t_end", required=True)
        n_samples = int(_getfloat(cp, "time", "n_samples", required=True))
        times = np.linspace(0.0, t_end, n_samples)

    dim_raw = _get(cp, "truncation", "dim")
    dim = int(dim_raw) if dim_raw else None

    bracket_raw = _get(cp, "thermometry", "bracket", "0.005,0.150")
    try:
        b_lo, b_hi = (float(x) for x in bracket_raw.split(","))
    except ValueError as exc:
        raise ParameterError("[thermometry] bracket must be lo,hi") from exc

    return RunConfig(
        units=units,
        params=params,
        temperature=temperature,
        temperature_grid=grid,
        solvers=solvers,
        n_max=n_max,
        times=times,
        dim=dim,
        thermometry_bracket=(b_lo, b_hi),
        thermometry_n_points=int(_getfloat(cp, "thermometry", "n_points", 200)),
        thermometry_dt=_getfloat(cp, "thermometry", "dt", 1e-9),
        freq_error=_getfloat(cp, "thermometry", "freq_error", 2.0 * math.pi * 10e3),
        seed=int(_getfloat(cp, "output", "seed", 0)),
    )
