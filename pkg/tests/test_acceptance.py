"""Acceptance gate: one test per top-level criterion, one printed verdict each.

Run with ``pytest -v -s tests/test_acceptance.py`` to see the verdict lines.
Each test prints exactly one [PASS]/[FAIL] line before asserting, and checks
its own wall-clock budget.
"""

import math
import time

import numpy as np
import pytest

from rabi_thermo.core import (
    NATURAL,
    PHYSICAL,
    RabiParams,
    ThermalOscillator,
    polaron_scalars,
)
from rabi_thermo.correlation import (
    corr_closed,
    corr_laguerre_oracle,
    corr_series,
    stable_weights,
)
from rabi_thermo.dynamics import (
    dominant_frequency,
    effective_frequency,
    laplace_poles,
    series_dynamics,
    single_term_dynamics,
    spectrum,
)
from rabi_thermo.exact import (
    ExactPropagator,
    auto_dim,
    build_hamiltonian,
    corr_fock_oracle,
    displacement_matrix,
    evolve_exact,
    initial_joint_state,
)
from rabi_thermo.thermometry import (
    frequency_slope,
    thermometry_roundtrip,
)

# The two parameter sets used throughout: a physical-unit transmon-like
# point (omega = 1e9 rad/s, 10 mK) and a natural-unit strong-asymmetry
# point (large beta*omega, epsilon = 0).
FIG1 = dict(params=RabiParams(1e8, 1e8, 1e9, 1e8),
            osc=ThermalOscillator(1e9, 0.010, PHYSICAL))
FIG2 = dict(params=RabiParams(0.0, 0.5, 0.5, 0.1),
            osc=ThermalOscillator(0.5, 1e-3, NATURAL))


def _verdict(name: str, ok: bool) -> bool:
    print(f"[{'PASS' if ok else 'FAIL'}] {name}")
    return ok


def _budget(name: str, t0: float, limit: float) -> None:
    elapsed = time.perf_counter() - t0
    assert elapsed < limit, f"{name}: runtime {elapsed:.1f}s exceeds {limit}s"


def test_correlation_four_way():
    """Closed form, harmonic series, Laguerre sum, and Fock trace agree."""
    t0 = time.perf_counter()
    worst = 0.0
    for cfg in (FIG1, FIG2):
        params, osc = cfg["params"], cfg["osc"]
        bw = osc.beta_omega
        sc = polaron_scalars(params, osc)
        tau = np.linspace(0.0, 4.0 * math.pi / params.omega, 61)
        closed = corr_closed(sc, bw, tau, omega=params.omega)
        series = corr_series(stable_weights(sc, bw, 20, omega=params.omega), tau)
        n_lag = max(60, int(math.log(1e14) / bw) + 20)
        laguerre = corr_laguerre_oracle(sc, bw, tau, n_terms=n_lag,
                                        omega=params.omega)
        fock = corr_fock_oracle(params, osc, tau, dim=60)
        for other in (series, laguerre, fock):
            worst = max(worst, float(np.max(np.abs(other - closed))))
    ok = worst < 1e-8
    _verdict(f"correlation four-way oracle (sup dev {worst:.2e} < 1e-8)", ok)
    _budget("correlation four-way", t0, 10.0)
    assert ok


def test_weight_identities():
    """Normalization, detailed balance, and the dominant asymmetric orders."""
    t0 = time.perf_counter()
    checks = []
    for cfg in (FIG1, FIG2):
        params, osc = cfg["params"], cfg["osc"]
        bw = osc.beta_omega
        sc = polaron_scalars(params, osc)
        series = stable_weights(sc, bw, 30, omega=params.omega)
        if sc.z < 1.0:
            checks.append(abs(series.coefficients.sum() - 1.0) < 1e-12)
        for n in range(1, 31):
            cn, cmn = series.coefficient(n), series.coefficient(-n)
            if cmn == 0.0:
                continue
            target = math.exp(-n * bw) if n * bw < 700 else 0.0
            checks.append(abs(cn / cmn - target) <= 1e-12 * max(1.0, target))
    # At the asymmetric set the two largest coefficients sit at n = 0, -1.
    params, osc = FIG2["params"], FIG2["osc"]
    series = stable_weights(polaron_scalars(params, osc), osc.beta_omega, 30,
                            omega=params.omega)
    top = series.orders[np.argsort(series.coefficients)[::-1][:2]]
    checks.append(set(top.tolist()) == {0, -1})
    ok = all(checks)
    _verdict("weight identities (normalization, detailed balance, "
             "dominant orders 0 and -1)", ok)
    _budget("weight identities", t0, 1.0)
    assert ok


def test_closed_form_consistency():
    """The n_max=0 series solver collapses onto the one-frequency formula."""
    t0 = time.perf_counter()
    params, osc = FIG1["params"], FIG1["osc"]
    times = np.linspace(0.0, 10.0 * 2.0 * math.pi / params.rabi_frequency, 1201)
    ser = series_dynamics(params, osc, times, n_max=0)
    single = single_term_dynamics(params, osc, times)
    dev = max(float(np.max(np.abs(ser.rho00 - single.rho00))),
              float(np.max(np.abs(ser.rho10 - single.rho10))))
    omega_eff = effective_frequency(params, osc)
    poles = np.asarray(laplace_poles(params, osc, n_max=0))
    poles = poles[np.argsort(poles.imag)]
    expected = np.array([-1j * omega_eff, 0.0, 1j * omega_eff])
    pole_dev = float(np.max(np.abs(poles - expected))) / omega_eff
    ok = dev < 1e-6 and pole_dev < 1e-10
    _verdict(f"closed-form consistency (trajectory dev {dev:.2e} < 1e-6, "
             f"pole dev {pole_dev:.2e} < 1e-10)", ok)
    _budget("closed-form consistency", t0, 5.0)
    assert ok


def test_uncoupled_limit():
    """g = 0: every solver reproduces the bare Rabi oscillation."""
    t0 = time.perf_counter()
    params = RabiParams(1e8, 1e8, 1e9, 0.0)
    osc = ThermalOscillator(1e9, 0.010, PHYSICAL)
    wr = params.rabi_frequency
    times = np.linspace(0.0, 10.0 * 2.0 * math.pi / wr, 1001)
    analytic = (params.epsilon ** 2
                + params.delta ** 2 * (1.0 + np.cos(wr * times)) / 2.0) / wr ** 2
    devs = {
        "exact": evolve_exact(params, osc, times),
        "series": series_dynamics(params, osc, times, n_max=5),
        "single": single_term_dynamics(params, osc, times),
    }
    worst = max(float(np.max(np.abs(traj.rho00 - analytic)))
                for traj in devs.values())
    ok = worst < 1e-8
    _verdict(f"uncoupled limit, three solvers (sup dev {worst:.2e} < 1e-8)", ok)
    _budget("uncoupled limit", t0, 5.0)
    assert ok


def test_fig1_spectral_reproduction():
    """Dominant-peak agreement between exact and one-frequency dynamics.

    Known honest failure: at g/omega = 0.25 the one-frequency (polaron
    closed-form) frequency sits ~7.6% below the exact dominant peak, which
    is 4-5 bins at the mandated >= 64-period record; the two-bin bound is
    unreachable there.  The series solver and the Laplace pole spectrum
    agree with the closed form, so the offset is the approximation error of
    the polaron/Born treatment at z ~ 0.64, not an implementation defect.
    """
    t0 = time.perf_counter()
    osc = ThermalOscillator(1e9, 0.010, PHYSICAL)
    cases = [(1e8, 1.45e-9, 2), (2.5e8, 1.6e-9, 2), (5e8, 1.8e-9, 5)]
    results = []
    secondary_ratio = 0.0
    for g, dt, max_bins in cases:
        params = RabiParams(1e8, 1e8, 1e9, g)
        times = dt * np.arange(2048)
        exact = evolve_exact(params, osc, times)
        single = single_term_dynamics(params, osc, times)
        n_periods = times[-1] * effective_frequency(params, osc) / (2 * math.pi)
        assert n_periods >= 64.0, f"only {n_periods:.1f} periods sampled"
        freqs, amps_e = spectrum(exact)
        _, amps_s = spectrum(single)
        bin_width = freqs[1] - freqs[0]
        peak_e = dominant_frequency(freqs, amps_e)
        peak_s = dominant_frequency(freqs, amps_s)
        bins_apart = abs(peak_e - peak_s) / bin_width
        results.append((g / params.omega, bins_apart, max_bins))
        if g == 5e8:
            # Secondary peak: largest local maximum away from the dominant
            # bin's immediate neighbourhood.
            main = int(np.argmax(amps_e))
            mask = np.abs(np.arange(len(amps_e)) - main) > 3
            secondary_ratio = float(np.max(amps_e[mask]) / amps_e[main])
    checks = [bins <= max_bins for _, bins, max_bins in results]
    checks.append(secondary_ratio > 0.10)
    detail = ", ".join(f"g/w={r:.2f}: {b:.1f} bins (<= {m})"
                       for r, b, m in results)
    ok = all(checks)
    _verdict(f"spectral peak reproduction ({detail}; "
             f"secondary ratio {secondary_ratio:.2f} > 0.10)", ok)
    _budget("spectral reproduction", t0, 60.0)
    assert ok, (
        "Expected failure at g/omega = 0.25: the polaron closed form, the "
        "series solver, and the Laplace poles all place the peak ~7.6% below "
        "the exact one (inherent approximation error), which exceeds the "
        "two-bin bound at >= 64-period records.  See the verdict line for "
        "the measured separations."
    )


def test_fig3_thermometry_roundtrip():
    """Sub-mK temperature recovery across the working range, plus the
    propagated effect of a fixed frequency-measurement offset."""
    t0 = time.perf_counter()
    params = RabiParams(0.0, 1e8, 1e9, 1e7)
    temps = np.arange(0.020, 0.0551, 0.005)
    errs = []
    for T_in in temps:
        res = thermometry_roundtrip(params, float(T_in), n_points=200, dt=1e-9)
        errs.append(abs(res.T_out - res.T_in))
    max_err_mk = 1e3 * max(errs)

    offset = 2.0 * math.pi * 1e4
    base = thermometry_roundtrip(params, 0.035, n_points=200, dt=1e-9)
    shifted = thermometry_roundtrip(params, 0.035, n_points=200, dt=1e-9,
                                    freq_offset=offset)
    slope = frequency_slope(params, 0.035)
    predicted = abs(offset / slope)
    measured = abs(shifted.T_out - base.T_out)
    slope_ok = abs(measured - predicted) < 0.20 * predicted

    ok = max_err_mk < 1.0 and slope_ok
    _verdict(f"thermometry round trip (max |T_out - T_in| = "
             f"{max_err_mk:.3f} mK < 1 mK; offset shift {1e3 * measured:.3f} "
             f"mK vs predicted {1e3 * predicted:.3f} mK within 20%)", ok)
    _budget("thermometry round trip", t0, 120.0)
    assert ok


def test_physical_invariants():
    """Conservation laws, series population sum, step scaling, truncation."""
    t0 = time.perf_counter()
    checks = []
    params, osc = FIG1["params"], FIG1["osc"]

    # Joint-state conservation under the exact propagator.
    dim = auto_dim(params, osc)
    prop = ExactPropagator.build(params, dim)
    h = build_hamiltonian(params, dim)
    rho0 = initial_joint_state(1.0, osc, dim)
    e0 = float(np.trace(h @ rho0).real)
    p0 = float(np.trace(rho0 @ rho0).real)
    for t in (0.0, 3.7e-9, 4.1e-8, 2.9e-7):
        rho = prop.joint_state(rho0, t)
        checks.append(abs(np.trace(rho).real - 1.0) < 1e-10)
        checks.append(float(np.max(np.abs(rho - rho.conj().T))) < 1e-10)
        checks.append(float(np.linalg.eigvalsh(rho).min()) > -1e-10)
        checks.append(abs(np.trace(rho @ rho).real - p0) < 1e-10)
        checks.append(abs(np.trace(h @ rho).real - e0) < 1e-10 * abs(e0))

    # Series solver conserves total population exactly (checked via rho00
    # staying in [0,1]; the solver itself enforces the 1e-6 leak guard, and
    # the populations enter the auxiliaries only through rho00, 1 - rho00).
    times = np.linspace(0.0, 2e-7, 801)
    ser = series_dynamics(params, osc, times, n_max=10)
    checks.append(float(np.max(np.abs(ser.rho00.imag))) < 1e-10)
    checks.append(bool(np.all(ser.rho00.real > -1e-10)))
    checks.append(bool(np.all(ser.rho00.real < 1.0 + 1e-10)))

    # Fourth-order step scaling: halving the substep cuts the error by
    # ~2^4, measured against a much finer reference on the same grid.
    dt = times[1] - times[0]
    ref = series_dynamics(params, osc, times, n_max=10, step=dt / 64.0)
    e4 = np.max(np.abs(series_dynamics(params, osc, times, n_max=10,
                                       step=dt / 4.0).rho00 - ref.rho00))
    e8 = np.max(np.abs(series_dynamics(params, osc, times, n_max=10,
                                       step=dt / 8.0).rho00 - ref.rho00))
    ratio = float(e4 / e8)
    checks.append(12.0 <= ratio <= 20.0)

    # Truncation convergence of the exact solver.
    lo = evolve_exact(params, osc, times, dim=dim)
    hi = evolve_exact(params, osc, times, dim=2 * dim)
    trunc_dev = float(np.max(np.abs(lo.rho00 - hi.rho00)))
    checks.append(trunc_dev < 1e-8)

    ok = all(checks)
    _verdict(f"physical invariants (conservation to 1e-10, step ratio "
             f"{ratio:.1f} in [12, 20], truncation dev {trunc_dev:.2e} "
             f"< 1e-8)", ok)
    _budget("physical invariants", t0, 30.0)
    assert ok


def test_displacement_oracles():
    """Laguerre closed form vs padded matrix exponential; identity at 0."""
    t0 = time.perf_counter()
    worst = 0.0
    for xi in (0.3, 1.0, 0.5 + 0.5j, -1j,
               (1.0 + 1.0j) / math.sqrt(2.0)):
        closed = displacement_matrix(xi, 60)
        # pad keeps boundary truncation leakage out of the compared block
        via_expm = displacement_matrix(xi, 60, method="expm", pad=20)
        worst = max(worst, float(np.max(np.abs(closed - via_expm))))
    identity_exact = bool(
        np.array_equal(displacement_matrix(0.0, 60), np.eye(60)))
    ok = worst < 1e-10 and identity_exact
    _verdict(f"displacement oracles (closed vs expm dev {worst:.2e} "
             f"< 1e-10; D(0) = identity exactly: {identity_exact})", ok)
    _budget("displacement oracles", t0, 5.0)
    assert ok
