"""Polaron-frame qubit dynamics.

Three views of the same equations of motion:

* :func:`single_term_dynamics` -- the closed form obtained by keeping only
  the zeroth harmonic of the correlation series (inverse Laplace transform
  done analytically), with the renormalized frequency
  Omega = sqrt(Delta^2 exp(-b) I0(z) + eps^2);
* :func:`series_dynamics` -- the truncated-series solver: the memory
  integrals reduce exactly to auxiliary linear ODEs because the kernel is a
  finite sum of exponentials, integrated with a fixed-step RK4;
* :func:`laplace_poles` -- the pole spectrum of the Laplace-space solution,
  an independent prediction of the oscillation frequencies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import PolaronScalars, RabiParams, ThermalOscillator, polaron_scalars
from .correlation import CorrelationSeries, stable_weights
from .errors import NumericalError, ParameterError, StepError
from .exact import QubitTrajectory

#: Minimum resolution of the fixed-step integrator: steps per fastest period.
_STEPS_PER_PERIOD = 40
_LEAK_TOL = 1e-6


def bessel_i0(z: float) -> float:
    """Modified Bessel I0 by its power series; ample for z < 8."""
    if z < 0:
        z = -z
    if z >= 8.0:
        raise NumericalError("I0 power series used outside its intended range z < 8")
    q = 0.25 * z * z
    term = 1.0
    total = 1.0
    k = 0
    while term > 1e-18 * total:
        k += 1
        term *= q / (k * k)
        total += term
    return total


def tunnelling_reduction(scalars: PolaronScalars) -> float:
    """The ac Stark factor exp(-b) I0(z), in (0, 1], computed in the
    under/overflow-safe A/E form (it equals the n = 0 series weight c_0)."""
    # c_0 = exp(-(A+E)) sum_k (A E)^k / (k!)^2
    a, e = scalars.A, scalars.E
    term = 1.0
    total = 1.0
    k = 0
    ae = a * e
    while term > 1e-18 * total:
        k += 1
        term *= ae / (k * k)
        total += term
    return math.exp(-scalars.b) * total


def effective_frequency(params: RabiParams, osc: ThermalOscillator) -> float:
    """Temperature-dependent qubit frequency sqrt(Delta^2 exp(-b) I0(z) + eps^2)."""
    scalars = polaron_scalars(params, osc)
    return math.sqrt(params.delta ** 2 * tunnelling_reduction(scalars) + params.epsilon ** 2)


@dataclass(frozen=True)
class SingleTermSolution:
    """Closed-form solution descriptor for the dominant-harmonic truncation."""

    Omega: float
    rho0: float
    b: float
    z: float
    reduction: float  # exp(-b) I0(z)


def single_term_solution(params: RabiParams, osc: ThermalOscillator,
                         rho0: float) -> SingleTermSolution:
    scalars = polaron_scalars(params, osc)
    red = tunnelling_reduction(scalars)
    omega_eff = math.sqrt(params.delta ** 2 * red + params.epsilon ** 2)
    return SingleTermSolution(Omega=omega_eff, rho0=rho0, b=scalars.b,
                              z=scalars.z, reduction=red)


def single_term_dynamics(params: RabiParams, osc: ThermalOscillator, times,
                         rho0: float = 1.0) -> QubitTrajectory:
    """Dominant-harmonic closed form for rho00(t) and rho10(t)."""
    if not 0.0 <= rho0 <= 1.0:
        raise ParameterError("initial population must be in [0, 1]")
    sol = single_term_solution(params, osc, rho0)
    times = np.asarray(times, dtype=float)
    om, eps, delta = sol.Omega, params.epsilon, params.delta
    red = sol.reduction
    if om == 0.0:
        rho00 = np.full_like(times, rho0)
        rho10 = np.zeros(times.shape, dtype=complex)
        return QubitTrajectory(times=times, rho00=rho00, rho10=rho10,
                               method="single_term")
    cos_t = np.cos(om * times)
    sin_t = np.sin(om * times)
    rho00 = (rho0 * eps ** 2
             + 0.5 * red * delta ** 2 * ((2 * rho0 - 1) * cos_t + 1.0)) / om ** 2
    rho10 = -(red * delta * (2 * rho0 - 1)
              * (eps * cos_t + 1j * om * sin_t - eps)) / (2 * om ** 2)
    return QubitTrajectory(times=times, rho00=rho00, rho10=rho10,
                           method="single_term")


def _default_step(params: RabiParams, n_max: int) -> float:
    """Fixed step resolving the oscillator, the bare Rabi frequency and the
    fastest retained auxiliary harmonic eps + n_max * omega."""
    fastest = max(params.omega, params.rabi_frequency,
                  params.epsilon + n_max * params.omega)
    return 2.0 * math.pi / (_STEPS_PER_PERIOD * fastest)


def series_dynamics(params: RabiParams, osc: ThermalOscillator, times,
                    rho0: float = 1.0, n_max: int = 10,
                    step: float | None = None) -> QubitTrajectory:
    """Truncated-series solver for the memory-kernel equations of motion.

    Because C(tau) = sum_n c_n exp(i n w tau), each memory integral splits
    into auxiliaries u_n (population branch) and v_n (its conjugate-kernel
    sibling) obeying

        du_n/dt = i(eps + n w) u_n + rho00(t),
        dv_n/dt = i(eps - n w) v_n + rho11(t),

    all zero at t = 0, and the coherence is assembled as
    rho10 = -i Delta/2 sum_n c_n (u_n - v_n); rho01 = conj(rho10), so the
    remaining two kernel families are redundant by conjugation.  The closed
    linear system (rho00, rho11, u, v) is integrated with classical RK4 at a
    fixed step.
    """
    if not 0.0 <= rho0 <= 1.0:
        raise ParameterError("initial population must be in [0, 1]")
    if n_max < 0:
        raise ParameterError("n_max must be non-negative")
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size < 2 or times[0] != 0.0:
        raise ParameterError("times must be a 1-d grid starting at 0")
    dts = np.diff(times)
    dt = dts[0]
    if dt <= 0 or not np.allclose(dts, dt, rtol=1e-9, atol=0.0):
        raise ParameterError("series solver requires a uniform time grid")

    series = stable_weights(polaron_scalars(params, osc), osc.beta_omega,
                            n_max, omega=params.omega)
    coeffs = series.coefficients
    orders = series.orders
    freq_u = 1j * (params.epsilon + orders * params.omega)
    freq_v = 1j * (params.epsilon - orders * params.omega)

    max_step = _default_step(params, n_max) if step is None else step
    n_sub = max(1, math.ceil(dt / max_step))
    h = dt / n_sub

    m = coeffs.size
    state = np.zeros(2 + 2 * m, dtype=complex)
    state[0] = rho0
    state[1] = 1.0 - rho0
    half_delta = 0.5 * params.delta

    def rho10_of(y):
        return -1j * half_delta * (coeffs @ (y[2:2 + m] - y[2 + m:]))

    def deriv(y):
        dy = np.empty_like(y)
        r10 = rho10_of(y)
        pop_rate = params.delta * r10.imag  # -i D/2 (r10 - conj(r10))
        dy[0] = pop_rate
        dy[1] = -pop_rate
        dy[2:2 + m] = freq_u * y[2:2 + m] + y[0]
        dy[2 + m:] = freq_v * y[2 + m:] + y[1]
        return dy

    rho00 = np.empty(times.size)
    rho10 = np.empty(times.size, dtype=complex)
    rho00[0] = rho0
    rho10[0] = 0.0
    for i in range(1, times.size):
        for _ in range(n_sub):
            k1 = deriv(state)
            k2 = deriv(state + 0.5 * h * k1)
            k3 = deriv(state + 0.5 * h * k2)
            k4 = deriv(state + h * k3)
            state = state + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        leak = abs(state[0].real + state[1].real - 1.0)
        if leak > _LEAK_TOL:
            raise StepError(
                f"population leak {leak:.2e} at t={times[i]:.3e}; refine the step"
            )
        rho00[i] = state[0].real
        rho10[i] = rho10_of(state)
    return QubitTrajectory(times=times, rho00=rho00, rho10=rho10, method="series")


def laplace_poles(params: RabiParams, osc: ThermalOscillator, n_max: int = 10,
                  rho0: float = 1.0, with_residues: bool = False):
    """Poles of the Laplace-space population solution R00(s).

    Clearing the simple-pole denominators of the correlation transforms turns
    the pole condition into a polynomial root-finding problem.  Poles are
    returned sorted by imaginary part; their imaginary parts are the
    predicted oscillation frequencies of rho00(t).  With with_residues=True
    also returns the residue of R00 at each pole (dominance ranking).
    """
    if params.delta == 0.0:
        # R00(s) = rho0 / s: populations frozen when tunnelling vanishes
        poles_out = np.array([0.0 + 0.0j])
        if with_residues:
            return poles_out, np.array([rho0 + 0.0j])
        return poles_out

    series = stable_weights(polaron_scalars(params, osc), osc.beta_omega,
                            n_max, omega=params.omega)
    # Work in units of s/omega so the cleared polynomial's coefficients stay
    # representable (roots are O(n_max), not O(1e9)).
    scale = params.omega
    eps = params.epsilon / scale
    d2 = (0.5 * params.delta / scale) ** 2

    # Denominator kernel: sum_n (c_n + c_-n) [1/(s - i(n+eps)) + 1/(s - i(n-eps))]
    # Numerator kernel:   sum_n (c_n + c_-n)  1/(s - i(n-eps))
    sym = series.coefficients + series.coefficients[::-1]
    pole_weights: dict[complex, list[float]] = {}

    def add(p: complex, wden: float, wnum: float):
        den, num = pole_weights.get(p, [0.0, 0.0])
        pole_weights[p] = [den + wden, num + wnum]

    for n, cn in zip(series.orders, sym):
        if cn == 0.0:
            continue  # a zero-weight pole never entered the transform
        add(1j * (n + eps), cn, 0.0)
        add(1j * (n - eps), cn, cn)

    kernel_poles = list(pole_weights)
    q = np.poly1d([1.0])
    for p in kernel_poles:
        q = q * np.poly1d([1.0, -p])
    partials = []
    for i, _ in enumerate(kernel_poles):
        r = np.poly1d([1.0])
        for j, p2 in enumerate(kernel_poles):
            if j != i:
                r = r * np.poly1d([1.0, -p2])
        partials.append(r)

    s_poly = np.poly1d([1.0, 0.0])
    den_poly = s_poly * s_poly * q
    num_poly = rho0 * s_poly * q
    for p, part in zip(kernel_poles, partials):
        wden, wnum = pole_weights[p]
        den_poly = den_poly + s_poly * (d2 * wden) * part
        num_poly = num_poly + (d2 * wnum) * part

    roots = np.roots(den_poly.coeffs)
    if np.any(~np.isfinite(roots)):
        raise NumericalError(
            f"root finder failed on coefficients {den_poly.coeffs!r}"
        )
    # cluster numerically coincident roots (e.g. the double root at s = 0)
    uniq: list[complex] = []
    for r in sorted(roots, key=lambda r: (r.imag, r.real)):
        if not uniq or abs(r - uniq[-1]) > 1e-9 * max(1.0, abs(r)):
            uniq.append(r)
        else:
            uniq[-1] = 0.5 * (uniq[-1] + r)
    uniq.sort(key=lambda r: r.imag)
    poles_out = scale * np.array(uniq)
    if not with_residues:
        return poles_out
    dden = den_poly.deriv()
    residues = np.array([
        num_poly(p) / dden(p) if abs(dden(p)) > 0 else np.inf
        for p in np.array(uniq)
    ])
    return poles_out, residues


def spectrum(traj: QubitTrajectory) -> tuple[np.ndarray, np.ndarray]:
    """One-sided amplitude spectrum of rho00(t) after mean removal.

    Normalized so a pure unit-amplitude cosine peaks at 1; the frequency
    axis is angular, in the same units as the model frequencies.
    """
    t = traj.times
    if t.size < 2:
        raise ParameterError("need at least two samples")
    dts = np.diff(t)
    dt = dts[0]
    if not np.allclose(dts, dt, rtol=1e-9, atol=0.0):
        raise ParameterError("spectrum requires a uniform time grid")
    sig = traj.rho00 - traj.rho00.mean()
    amp = 2.0 * np.abs(np.fft.rfft(sig)) / sig.size
    freqs = 2.0 * math.pi * np.fft.rfftfreq(sig.size, d=dt)
    return freqs, amp


def dominant_frequency(freqs: np.ndarray, amps: np.ndarray) -> float:
    """Location of the largest nonzero-frequency spectral peak."""
    if freqs.size < 2:
        raise ParameterError("spectrum too short")
    k = 1 + int(np.argmax(amps[1:]))
    return float(freqs[k])
