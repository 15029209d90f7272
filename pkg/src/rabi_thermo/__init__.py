"""Qubit-oscillator dynamics beyond the rotating-wave approximation, and
oscillator thermometry from the temperature-dependent qubit frequency."""

__version__ = "0.1.0"

from .core import (NATURAL, PHYSICAL, PolaronScalars, RabiParams,
                   ThermalOscillator, UnitSystem, occupation, polaron_scalars,
                   single_term_validity, temperature_from_occupation)
from .correlation import (CorrelationSeries, corr_closed, corr_laguerre_oracle,
                          corr_laplace, corr_series, stable_weights)
from .dynamics import (effective_frequency, laplace_poles, series_dynamics,
                       single_term_dynamics, spectrum)
from .exact import (QubitTrajectory, build_hamiltonian, corr_fock_oracle,
                    displacement_matrix, evolve_exact, thermal_state)
from .thermometry import (FrequencyFit, ThermometryResult, fit_frequency,
                          invert_temperature, sensitivity_curve,
                          thermometry_roundtrip, thermometry_sweep)
