import math

import numpy as np
import pytest

from rabi_thermo.core import PHYSICAL, RabiParams, ThermalOscillator
from rabi_thermo.correlation import corr_closed
from rabi_thermo.core import polaron_scalars
from rabi_thermo.errors import ParameterError, TruncationError
from rabi_thermo.exact import (ExactPropagator, auto_dim, build_hamiltonian,
                               corr_fock_oracle, displaced_number_coeff,
                               displacement_matrix, evolve_exact,
                               initial_joint_state, thermal_state)

FIG1 = RabiParams(epsilon=1e8, delta=1e8, omega=1e9, g=1e8)
OSC1 = ThermalOscillator(1e9, 0.010, PHYSICAL)


class TestHamiltonian:
    def test_commuting_terms_diagonal(self):
        p = RabiParams(epsilon=2.0, delta=0.0, omega=3.0, g=0.0)
        h = build_hamiltonian(p, 4)
        expected = np.diag([1.0 + 3.0 * n for n in range(4)]
                           + [-1.0 + 3.0 * n for n in range(4)])
        assert np.allclose(h, expected, atol=1e-15)

    def test_coupling_block_structure(self):
        p = RabiParams(epsilon=0.0, delta=0.0, omega=1.0, g=1.0)
        h = build_hamiltonian(p, 2)
        # off-diagonal Fock coupling g on (n, n+1), signed by the qubit index
        assert h[0, 1] == pytest.approx(1.0)
        assert h[2, 3] == pytest.approx(-1.0)
        assert np.allclose(h, h.conj().T)

    def test_ground_energy_converged_at_dim40(self):
        e40 = np.linalg.eigvalsh(build_hamiltonian(FIG1, 40))[0]
        e60 = np.linalg.eigvalsh(build_hamiltonian(FIG1, 60))[0]
        assert abs(e40 - e60) < 1e-10 * abs(e60)

    def test_dim_too_small(self):
        with pytest.raises(ParameterError):
            build_hamiltonian(FIG1, 1)


class TestThermalState:
    def test_zero_temperature_projector(self):
        rho = thermal_state(ThermalOscillator(1e9, 0.0, PHYSICAL), 5)
        expected = np.zeros((5, 5))
        expected[0, 0] = 1.0
        assert np.allclose(rho, expected)

    def test_geometric_populations(self):
        # beta*omega = ln 2 -> populations 1/2, 1/4, 1/8, ...
        from rabi_thermo.core import NATURAL
        osc = ThermalOscillator(math.log(2.0), 1.0, NATURAL)
        rho = thermal_state(osc, 60)
        pops = np.diag(rho)
        for n in range(8):
            assert pops[n] == pytest.approx(0.5 ** (n + 1), rel=1e-10)

    def test_truncated_mean_occupation(self):
        rho = thermal_state(OSC1, 40)
        mean_n = float(np.sum(np.diag(rho) * np.arange(40)))
        assert mean_n == pytest.approx(OSC1.occupation, abs=1e-6)

    def test_unconverged_truncation_raises(self):
        with pytest.raises(TruncationError):
            thermal_state(OSC1, 4)


class TestEvolution:
    def test_uncoupled_rabi_formula(self):
        p = RabiParams(epsilon=1e8, delta=1e8, omega=1e9, g=0.0)
        times = np.linspace(0, 3e-7, 301)
        traj = evolve_exact(p, OSC1, times)
        wr = p.rabi_frequency
        ref = (p.epsilon ** 2 + p.delta ** 2 * (1 + np.cos(wr * times)) / 2) / wr ** 2
        assert np.max(np.abs(traj.rho00 - ref)) < 1e-10

    def test_no_tunnelling_freezes_populations(self):
        p = RabiParams(epsilon=1e8, delta=0.0, omega=1e9, g=1e8)
        times = np.linspace(0, 3e-7, 31)
        traj = evolve_exact(p, OSC1, times, rho00_init=0.7)
        assert np.allclose(traj.rho00, 0.7, atol=1e-10)

    def test_fig1_peak_below_bare_rabi(self):
        from rabi_thermo.dynamics import dominant_frequency, spectrum
        times = np.arange(2048) * 1.45e-9
        traj = evolve_exact(FIG1, OSC1, times)
        freqs, amps = spectrum(traj)
        assert dominant_frequency(freqs, amps) < FIG1.rabi_frequency

    def test_invalid_time_grid(self):
        with pytest.raises(ParameterError):
            evolve_exact(FIG1, OSC1, [1e-9, 2e-9])

    def test_conserved_quantities(self):
        dim = auto_dim(FIG1, OSC1)
        prop = ExactPropagator.build(FIG1, dim)
        h = build_hamiltonian(FIG1, dim)
        rho0 = initial_joint_state(1.0, OSC1, dim)
        ref_purity = np.trace(rho0 @ rho0).real
        ref_energy = np.trace(rho0 @ h).real
        for t in (0.0, 0.7e-7, 2.3e-7):
            rho = prop.joint_state(rho0, t)
            assert np.trace(rho).real == pytest.approx(1.0, abs=1e-10)
            assert np.max(np.abs(rho - rho.conj().T)) < 1e-10
            assert np.linalg.eigvalsh(rho).min() > -1e-10
            assert np.trace(rho @ rho).real == pytest.approx(ref_purity, abs=1e-10)
            assert np.trace(rho @ h).real == pytest.approx(ref_energy,
                                                           rel=1e-10)

    def test_truncation_convergence(self):
        times = np.linspace(0, 4e-7, 101)
        dim = auto_dim(FIG1, OSC1)
        a = evolve_exact(FIG1, OSC1, times, dim=dim)
        b = evolve_exact(FIG1, OSC1, times, dim=2 * dim)
        assert np.max(np.abs(a.rho00 - b.rho00)) < 1e-8


class TestDisplacement:
    def test_identity_at_zero(self):
        assert np.array_equal(displacement_matrix(0.0, 6), np.eye(6))

    def test_vacuum_overlap(self):
        xi = 0.37 - 0.21j
        c00 = displaced_number_coeff(0, 0, xi)
        assert c00 == pytest.approx(math.exp(-abs(xi) ** 2 / 2), rel=1e-13)

    def test_closed_form_vs_expm(self):
        for xi in (0.2, 0.2 + 0.5j, -0.9j, 1.0):
            closed = displacement_matrix(xi, 60)
            brute = displacement_matrix(xi, 60, method="expm")
            # compare away from the truncation edge
            assert np.max(np.abs(closed[:40, :40] - brute[:40, :40])) < 1e-10

    def test_specific_element_both_routes(self):
        xi = 0.2
        closed = displaced_number_coeff(1, 3, xi)
        brute = displacement_matrix(xi, 60, method="expm")[3, 1]
        assert closed == pytest.approx(brute, abs=1e-10)

    def test_unitary_up_to_leakage(self):
        d = displacement_matrix(0.3 + 0.1j, 40)
        prod = d.conj().T @ d
        assert np.max(np.abs(prod[:20, :20] - np.eye(20))) < 1e-10


class TestFockCorrelation:
    def test_tau_zero(self):
        assert corr_fock_oracle(FIG1, OSC1, 0.0, dim=40) == pytest.approx(1.0, abs=1e-10)

    def test_periodicity(self):
        period = 2 * math.pi / FIG1.omega
        val = corr_fock_oracle(FIG1, OSC1, period, dim=40)
        assert val == pytest.approx(1.0, abs=1e-9)

    def test_against_closed_form(self):
        tau = math.pi / FIG1.omega
        sc = polaron_scalars(FIG1, OSC1)
        closed = corr_closed(sc, OSC1.beta_omega, tau, FIG1.omega)
        assert corr_fock_oracle(FIG1, OSC1, tau, dim=60) == pytest.approx(closed, abs=1e-8)
