"""Exception hierarchy shared across the package.

Split by how the CLI maps failures to exit codes: configuration/parameter
problems (exit 2), numerical problems (exit 3), I/O problems (exit 4).
"""


class RabiThermoError(Exception):
    """Base class for all package errors."""


class ParameterError(RabiThermoError):
    """Invalid input parameter or configuration value."""


class NumericalError(RabiThermoError):
    """A numerical procedure failed or left its validity range."""


class TruncationError(NumericalError):
    """Fock-space truncation too small for the requested state."""


class StepError(NumericalError):
    """Integrator step too coarse (population leak above tolerance)."""


class PoleError(NumericalError):
    """Laplace transform evaluated at (or too close to) one of its poles."""

    def __init__(self, message, n=None):
        super().__init__(message)
        self.n = n


class BracketError(NumericalError):
    """Search bracket does not contain the sought solution."""


class PlateauError(BracketError):
    """Frequency-temperature curve not monotone on the bracket."""


class RangeError(BracketError):
    """Measured value outside the invertible range of the model curve."""


class InsufficientDataError(ParameterError):
    """Too few samples (or too short a record) for the requested fit."""
