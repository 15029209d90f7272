"""Model parameters, unit handling and derived polaron-frame scalars.

Everything downstream (exact solver, correlation function, polaron dynamics,
thermometry) pulls its numbers from here.  All frequencies are angular:
rad/s in physical mode, dimensionless in natural mode (hbar = kB = 1, so the
thermal ratio is omega/T directly).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ParameterError

# SI-defined constants; fixed, never user-overridable.
HBAR = 1.054571817e-34  # J s
KB = 1.380649e-23       # J / K

#: Default cutoff on z = 2|alpha|^2 sqrt(N(N+1)) below which the zeroth
#: series term dominates.  Separates the working regime (z ~ 0.1) from the
#: breakdown regime (z ~ 2.6).
SINGLE_TERM_Z_THRESHOLD = 0.3


@dataclass(frozen=True)
class UnitSystem:
    """Unit convention linking frequency and temperature.

    mode "natural": frequencies dimensionless, thermal ratio omega/T.
    mode "physical": frequencies in rad/s, T in kelvin, ratio hbar*omega/(kB*T).
    """

    mode: str = "physical"

    def __post_init__(self):
        if self.mode not in ("natural", "physical"):
            raise ParameterError(f"unknown unit mode {self.mode!r}")

    def thermal_ratio(self, omega: float, temperature: float) -> float:
        """Return beta*omega for an oscillator of (angular) frequency omega."""
        if omega <= 0:
            raise ParameterError("omega must be positive")
        if temperature < 0:
            raise ParameterError("temperature must be non-negative")
        if temperature == 0.0:
            return math.inf
        if self.mode == "natural":
            return omega / temperature
        return HBAR * omega / (KB * temperature)

    def temperature_from_ratio(self, omega: float, beta_omega: float) -> float:
        """Inverse of :meth:`thermal_ratio`."""
        if omega <= 0:
            raise ParameterError("omega must be positive")
        if beta_omega <= 0:
            raise ParameterError("beta*omega must be positive")
        if math.isinf(beta_omega):
            return 0.0
        if self.mode == "natural":
            return omega / beta_omega
        return HBAR * omega / (KB * beta_omega)


NATURAL = UnitSystem("natural")
PHYSICAL = UnitSystem("physical")


def occupation(omega: float, temperature: float, units: UnitSystem = PHYSICAL) -> float:
    """Bose-Einstein mean occupation 1/(exp(beta*omega) - 1).

    Returns 0 exactly at T = 0 (explicit limit branch, no overflow).
    """
    bw = units.thermal_ratio(omega, temperature)
    if bw > 700.0:  # exp would overflow; N underflows to 0 anyway
        return 0.0
    return 1.0 / math.expm1(bw)


def temperature_from_occupation(omega: float, n: float, units: UnitSystem = PHYSICAL) -> float:
    """Invert the Bose-Einstein occupation back to a temperature."""
    if n < 0:
        raise ParameterError("occupation must be non-negative")
    if n == 0.0:
        return 0.0
    bw = math.log1p(1.0 / n)
    return units.temperature_from_ratio(omega, bw)


@dataclass(frozen=True)
class RabiParams:
    """The four model frequencies: splitting, tunnelling, oscillator, coupling."""

    epsilon: float
    delta: float
    omega: float
    g: float

    def __post_init__(self):
        if self.omega <= 0:
            raise ParameterError("omega must be positive")
        if self.delta < 0:
            raise ParameterError("delta must be non-negative")
        if self.g < 0:
            raise ParameterError("g must be non-negative")
        if self.epsilon < 0:
            raise ParameterError("epsilon must be non-negative (sign convention fixed)")

    @property
    def rabi_frequency(self) -> float:
        """Bare Rabi frequency sqrt(epsilon^2 + delta^2)."""
        return math.hypot(self.epsilon, self.delta)

    @property
    def alpha(self) -> float:
        """Polaron displacement 2 g / omega."""
        return 2.0 * self.g / self.omega


@dataclass(frozen=True)
class ThermalOscillator:
    """Oscillator frequency/temperature pair with its unit system."""

    omega: float
    temperature: float
    units: UnitSystem = PHYSICAL

    def __post_init__(self):
        if self.omega <= 0:
            raise ParameterError("omega must be positive")
        if self.temperature < 0:
            raise ParameterError("temperature must be non-negative")

    @property
    def beta_omega(self) -> float:
        return self.units.thermal_ratio(self.omega, self.temperature)

    @property
    def occupation(self) -> float:
        return occupation(self.omega, self.temperature, self.units)

    @classmethod
    def from_occupation(cls, omega: float, n: float, units: UnitSystem = PHYSICAL):
        return cls(omega, temperature_from_occupation(omega, n, units), units)


@dataclass(frozen=True)
class PolaronScalars:
    """Dimensionless quantities the polaron-frame treatment runs on.

    alpha = 2g/omega, A = alpha^2 N (absorption weight),
    E = alpha^2 (N+1) (emission weight), b = A + E = alpha^2 (2N+1),
    z = 2 sqrt(A E) = 2 alpha^2 sqrt(N(N+1)).
    """

    alpha: float
    N: float
    A: float = field(init=False)
    E: float = field(init=False)
    b: float = field(init=False)
    z: float = field(init=False)

    def __post_init__(self):
        a2 = self.alpha * self.alpha
        object.__setattr__(self, "A", a2 * self.N)
        object.__setattr__(self, "E", a2 * (self.N + 1.0))
        object.__setattr__(self, "b", self.A + self.E)
        object.__setattr__(self, "z", 2.0 * math.sqrt(self.A * self.E))


def polaron_scalars(params: RabiParams, osc: ThermalOscillator) -> PolaronScalars:
    """Bundle alpha, A, E, b, z, N for a parameter set at a temperature."""
    if osc.omega != params.omega:
        raise ParameterError("oscillator frequency disagrees with model omega")
    return PolaronScalars(alpha=params.alpha, N=osc.occupation)


@dataclass(frozen=True)
class SingleTermValidity:
    z_value: float
    valid: bool
    threshold: float


def single_term_validity(
    scalars: PolaronScalars, threshold: float = SINGLE_TERM_Z_THRESHOLD
) -> SingleTermValidity:
    """Whether the zeroth harmonic dominates the correlation series (z small)."""
    return SingleTermValidity(z_value=scalars.z, valid=scalars.z < threshold,
                              threshold=threshold)
