"""Oscillator thermometry from the temperature-dependent qubit frequency.

Pipeline: simulate (or measure) rho00(t), fit a three-parameter cosine
offset + amplitude * cos(Omega t) by separable least squares, then invert
the monotone frequency-temperature curve Omega(T) by bisection.  The fit is
deliberately model-matched to the dominant-harmonic closed form, so the
degradation of long records by envelope effects is a real feature of the
method, not an artifact; a DFT peak estimator is provided as a secondary
route for comparison.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import RabiParams, ThermalOscillator, UnitSystem, PHYSICAL
from .dynamics import dominant_frequency, effective_frequency, spectrum
from .errors import (BracketError, InsufficientDataError, ParameterError,
                     PlateauError, RangeError)
from .exact import QubitTrajectory, evolve_exact

#: Default inversion bracket (kelvin); the low edge stays clear of the
#: low-temperature plateau of Omega(T).
DEFAULT_T_BRACKET = (0.005, 0.150)
#: Default frequency-measurement error used for uncertainty propagation.
DEFAULT_FREQ_ERROR = 2.0 * math.pi * 10e3  # rad/s

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class FrequencyFit:
    """Result of the separable cosine fit."""

    omega_fit: float
    offset: float
    amplitude: float
    residual_rms: float
    n_points: int
    dt: float
    degenerate: bool = False


def _cosine_residual(times, values, omega):
    """Best offset/amplitude for fixed omega and the residual RMS."""
    design = np.column_stack([np.ones_like(times), np.cos(omega * times)])
    coef, *_ = np.linalg.lstsq(design, values, rcond=None)
    resid = values - design @ coef
    return float(coef[0]), float(coef[1]), math.sqrt(float(np.mean(resid ** 2)))


def fit_frequency(times, values, bracket) -> FrequencyFit:
    """Separable least-squares frequency estimate on a bracket.

    Coarse grid scan (spacing under half a DFT bin) followed by
    golden-section refinement of the residual RMS.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    lo, hi = float(bracket[0]), float(bracket[1])
    if not 0.0 < lo < hi:
        raise ParameterError("bracket must satisfy 0 < lo < hi")
    if times.size < 8:
        raise InsufficientDataError("need at least 8 samples")
    span = float(times[-1] - times[0])
    if span * hi < 2.0 * math.pi:
        raise InsufficientDataError(
            "record shorter than one oscillation period anywhere in the bracket"
        )

    grid_step = 0.5 * math.pi / span  # half a DFT bin
    n_grid = max(8, int(math.ceil((hi - lo) / grid_step)) + 1)
    grid = np.linspace(lo, hi, n_grid)
    rms = np.array([_cosine_residual(times, values, w)[2] for w in grid])
    k = int(np.argmin(rms))
    if k in (0, n_grid - 1):
        scale = max(1e-30, float(np.std(values)))
        if rms[k] < 0.999 * rms[min(max(k, 1), n_grid - 2)] and rms[k] > 1e-12 * scale:
            raise BracketError("residual minimum at bracket boundary; widen the bracket")
    a = grid[max(0, k - 1)]
    b = grid[min(n_grid - 1, k + 1)]

    # golden-section refinement to relative tolerance 1e-12
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc = _cosine_residual(times, values, c)[2]
    fd = _cosine_residual(times, values, d)[2]
    while (b - a) > 1e-12 * b:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = _cosine_residual(times, values, c)[2]
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = _cosine_residual(times, values, d)[2]
    omega = 0.5 * (a + b)
    offset, amplitude, resid = _cosine_residual(times, values, omega)
    scale = max(float(np.max(np.abs(values))), 1e-30)
    degenerate = abs(amplitude) < 1e-9 * scale
    sig_std = float(np.std(values))
    if sig_std > 1e-9 * scale and resid > 0.9 * sig_std:
        raise BracketError(
            "best fit on the bracket leaves the signal unexplained; "
            "the true frequency likely lies outside the bracket"
        )
    dt = float(times[1] - times[0]) if times.size > 1 else 0.0
    return FrequencyFit(omega_fit=omega, offset=offset, amplitude=amplitude,
                        residual_rms=resid, n_points=int(times.size), dt=dt,
                        degenerate=degenerate)


def fit_frequency_dft(traj: QubitTrajectory) -> float:
    """Secondary estimator: spectral peak with parabolic interpolation."""
    freqs, amps = spectrum(traj)
    k = 1 + int(np.argmax(amps[1:]))
    if 1 <= k < amps.size - 1:
        y0, y1, y2 = amps[k - 1], amps[k], amps[k + 1]
        denom = y0 - 2.0 * y1 + y2
        shift = 0.5 * (y0 - y2) / denom if denom != 0 else 0.0
        return float(freqs[k] + shift * (freqs[1] - freqs[0]))
    return dominant_frequency(freqs, amps)


def _omega_of_t(params: RabiParams, units: UnitSystem):
    def f(t: float) -> float:
        return effective_frequency(params, ThermalOscillator(params.omega, t, units))
    return f


def invert_temperature(omega_meas: float, params: RabiParams,
                       bracket=DEFAULT_T_BRACKET,
                       units: UnitSystem = PHYSICAL) -> float:
    """Bisection on the monotone curve Omega(T) = omega_meas."""
    t_lo, t_hi = float(bracket[0]), float(bracket[1])
    if not 0.0 < t_lo < t_hi:
        raise ParameterError("temperature bracket must satisfy 0 < lo < hi")
    f = _omega_of_t(params, units)
    grid = np.linspace(t_lo, t_hi, 64)
    vals = np.array([f(t) for t in grid])
    diffs = np.diff(vals)
    if not (np.all(diffs < 0) or np.all(diffs > 0)):
        raise PlateauError(
            "Omega(T) not strictly monotone on the bracket (low-T plateau); "
            "raise the lower bracket edge"
        )
    v_min, v_max = float(vals.min()), float(vals.max())
    if not v_min <= omega_meas <= v_max:
        raise RangeError(
            f"measured frequency {omega_meas:.9e} outside the invertible range "
            f"[{v_min:.9e}, {v_max:.9e}]"
        )
    decreasing = vals[0] > vals[-1]
    a, b = t_lo, t_hi
    while (b - a) > 1e-12 * b:
        mid = 0.5 * (a + b)
        above = f(mid) > omega_meas
        if above == decreasing:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


def frequency_slope(params: RabiParams, temperature: float,
                    units: UnitSystem = PHYSICAL, rel_step: float = 1e-6) -> float:
    """Centered finite-difference dOmega/dT."""
    f = _omega_of_t(params, units)
    h = rel_step * temperature
    return (f(temperature + h) - f(temperature - h)) / (2.0 * h)


@dataclass(frozen=True)
class ThermometryResult:
    """One simulate-fit-invert round trip."""

    T_in: float | None
    omega_fit: float
    T_out: float
    abs_error: float | None
    dOmega_dT: float
    T_uncertainty_from_df: float
    fit: FrequencyFit


def thermometry_roundtrip(params: RabiParams, T_in: float,
                          n_points: int = 200, dt: float = 1e-9,
                          dim: int | None = None,
                          bracket=DEFAULT_T_BRACKET,
                          units: UnitSystem = PHYSICAL,
                          freq_error: float = DEFAULT_FREQ_ERROR,
                          freq_offset: float = 0.0) -> ThermometryResult:
    """Simulate exactly at T_in, fit the frequency, invert back to T_out.

    freq_offset adds a deterministic measurement error to the fitted
    frequency before inversion (the red-curve construction).
    """
    osc = ThermalOscillator(params.omega, T_in, units)
    times = np.arange(n_points) * dt
    traj = evolve_exact(params, osc, times, rho00_init=1.0, dim=dim)
    f = _omega_of_t(params, units)
    w_lo, w_hi = sorted((f(bracket[0]), f(bracket[1])))
    fit = fit_frequency(traj.times, traj.rho00,
                        (0.995 * w_lo, 1.005 * w_hi))
    omega_meas = fit.omega_fit + freq_offset
    t_out = invert_temperature(omega_meas, params, bracket, units)
    slope = frequency_slope(params, t_out, units)
    return ThermometryResult(
        T_in=T_in,
        omega_fit=fit.omega_fit,
        T_out=t_out,
        abs_error=abs(t_out - T_in),
        dOmega_dT=slope,
        T_uncertainty_from_df=abs(freq_error / slope) if slope != 0 else math.inf,
        fit=fit,
    )


def thermometry_sweep(params: RabiParams, temperatures, n_points: int = 200,
                      dt: float = 1e-9, dim: int | None = None,
                      bracket=DEFAULT_T_BRACKET, units: UnitSystem = PHYSICAL,
                      freq_error: float = DEFAULT_FREQ_ERROR,
                      max_workers: int | None = None) -> list[ThermometryResult]:
    """Round trips over a temperature grid, merged in grid order.

    Parallelism capped by RABI_THERMO_THREADS (default 1); points are
    independent so the result is deterministic either way.
    """
    if max_workers is None:
        max_workers = int(os.environ.get("RABI_THERMO_THREADS", "1"))
    temps = list(temperatures)

    def one(t):
        return thermometry_roundtrip(params, t, n_points=n_points, dt=dt,
                                     dim=dim, bracket=bracket, units=units,
                                     freq_error=freq_error)

    if max_workers <= 1:
        return [one(t) for t in temps]
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(one, temps))


def sensitivity_curve(params: RabiParams, T_grid,
                      units: UnitSystem = PHYSICAL) -> np.ndarray:
    """Columns (T, Omega(T), dOmega/dT) for design sweeps and plots."""
    T_grid = np.asarray(T_grid, dtype=float)
    if T_grid.size == 0 or np.any(T_grid <= 0) or np.any(np.diff(T_grid) <= 0):
        raise ParameterError("T_grid must be ascending and positive")
    f = _omega_of_t(params, units)
    out = np.empty((T_grid.size, 3))
    for i, t in enumerate(T_grid):
        out[i] = (t, f(t), frequency_slope(params, t, units))
    return out
