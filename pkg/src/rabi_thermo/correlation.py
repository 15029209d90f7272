"""Thermal correlation function of the displaced oscillator mode.

Four independent evaluations of C(tau) live in this package:

1. the closed form :func:`corr_closed`;
2. the truncated harmonic series :func:`corr_series` built from
   :func:`stable_weights`;
3. a plain-Laguerre thermal sum :func:`corr_laguerre_oracle`;
4. a truncated-Fock-space trace (simulate module :mod:`.exact`).

The series representation is the one the dynamics solvers consume, because a
finite sum of harmonics c_n exp(i n omega tau) has a trivial Laplace
transform (a sum of simple poles, :func:`corr_laplace`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import PolaronScalars
from .errors import NumericalError, ParameterError, PoleError

#: Relative size at which the inner sums of the weights terminate.
_TERM_CUTOFF = 1e-18


def corr_closed(scalars: PolaronScalars, beta_omega: float, tau, omega: float = 1.0):
    """Closed-form C(tau).

    exp(-alpha^2 [(1 - cos w tau) coth(bw/2) + i sin w tau]); the T = 0 limit
    (beta_omega = inf) has coth -> 1.
    """
    tau = np.asarray(tau, dtype=float)
    a2 = scalars.alpha * scalars.alpha
    coth = 1.0 if math.isinf(beta_omega) else 1.0 / math.tanh(0.5 * beta_omega)
    wt = omega * tau
    exponent = -a2 * ((1.0 - np.cos(wt)) * coth + 1j * np.sin(wt))
    out = np.exp(exponent)
    return out if out.ndim else complex(out)


@dataclass(frozen=True)
class CorrelationSeries:
    """Truncated harmonic representation C(tau) ~ sum_n c_n exp(i n w tau).

    coefficients holds c_n for n = -n_max .. +n_max in that order; all c_n
    are real and non-negative, and sum_n c_n -> 1 as n_max -> inf.
    """

    n_max: int
    coefficients: np.ndarray
    harmonic: float  # the oscillator frequency omega

    @property
    def orders(self) -> np.ndarray:
        return np.arange(-self.n_max, self.n_max + 1)

    def coefficient(self, n: int) -> float:
        if abs(n) > self.n_max:
            raise ParameterError(f"order {n} outside truncation +-{self.n_max}")
        return float(self.coefficients[n + self.n_max])


def _bare_weight(a: float, e: float, n: int) -> float:
    """w_n = sum_k a^(n+k) e^k / (k! (n+k)!) for n >= 0.

    Equals I_n(z) exp(-n bw / 2) with z = 2 sqrt(a e): both the Bessel
    argument and the thermal exponential collapse into powers of a and e, so
    nothing here overflows or underflows even when each factor would (for
    example bw ~ 500, where exp(-n bw/2) and I_n would under/overflow
    separately while the product is just a^n).
    """
    if n < 0:
        raise ValueError("n must be non-negative here; swap a and e for -n")
    if a == 0.0:
        return 1.0 if n == 0 else 0.0
    # term_0 = a^n / n!, then term_{k+1} = term_k * a e / ((k+1)(n+k+1))
    term = math.exp(n * math.log(a) - math.lgamma(n + 1))
    total = term
    ae = a * e
    k = 0
    while term > _TERM_CUTOFF * total:
        term *= ae / ((k + 1.0) * (n + k + 1.0))
        total += term
        k += 1
        if k > 10_000:
            raise NumericalError("weight series failed to converge")
    return total


def stable_weights(scalars: PolaronScalars, beta_omega: float, n_max: int,
                   omega: float = 1.0) -> CorrelationSeries:
    """Series coefficients c_n = exp(-b) w_n without overflow or underflow.

    w_{-n} is w_n with the absorption and emission weights A and E swapped.
    """
    if n_max < 0:
        raise ParameterError("n_max must be non-negative")
    a, e = scalars.A, scalars.E
    prefactor = math.exp(-scalars.b)
    coeffs = np.empty(2 * n_max + 1)
    for n in range(n_max + 1):
        coeffs[n_max + n] = prefactor * _bare_weight(a, e, n)
        coeffs[n_max - n] = prefactor * _bare_weight(e, a, n)
    return CorrelationSeries(n_max=n_max, coefficients=coeffs, harmonic=omega)


def corr_series(series: CorrelationSeries, tau):
    """Evaluate the truncated harmonic series at tau (scalar or array)."""
    tau = np.asarray(tau, dtype=float)
    phases = np.exp(1j * np.multiply.outer(tau, series.orders * series.harmonic))
    out = phases @ series.coefficients
    return out if out.ndim else complex(out)


def corr_laguerre_oracle(scalars: PolaronScalars, beta_omega: float, tau,
                         n_terms: int = 60, omega: float = 1.0):
    """Thermal Laguerre-sum evaluation of C(tau) (third independent route).

    (1/Z) exp(-alpha^2 [1 - exp(-i w tau)]) sum_n exp(-bw n) L_n(y) with
    y = 2 alpha^2 (1 - cos w tau); plain Laguerre polynomials by their
    three-term recurrence.
    """
    if not math.isinf(beta_omega) and beta_omega * n_terms < math.log(1e14):
        raise NumericalError(
            f"n_terms={n_terms} leaves thermal tail exp(-bw n) above 1e-14; "
            f"need > {math.log(1e14) / beta_omega:.0f} terms at bw={beta_omega:.3g}"
        )
    tau = np.asarray(tau, dtype=float)
    a2 = scalars.alpha * scalars.alpha
    wt = omega * tau
    y = 2.0 * a2 * (1.0 - np.cos(wt))
    if math.isinf(beta_omega):
        z_part = np.ones_like(y)  # Z = 1, only n = 0 survives
    else:
        q = math.exp(-beta_omega)
        lm1 = np.zeros_like(y)
        ln = np.ones_like(y)  # L_0
        z_part = ln.copy()
        qn = 1.0
        for n in range(1, n_terms + 1):
            ln, lm1 = ((2 * n - 1 - y) * ln - (n - 1) * lm1) / n, ln
            qn *= q
            z_part += qn * ln
        z_part *= 1.0 - q  # divide by Z = 1/(1 - q)
    out = np.exp(-a2 * (1.0 - np.exp(-1j * wt))) * z_part
    return out if out.ndim else complex(out)


def corr_laplace(series: CorrelationSeries, s: complex, conjugate: bool = False) -> complex:
    """Laplace transform C'(s) = sum_n c_n / (s - i n w).

    With conjugate=True returns the transform of conj(C), i.e.
    C''(s) = sum_n c_n / (s + i n w).
    """
    sign = 1.0 if conjugate else -1.0
    w = series.harmonic
    total = 0.0 + 0.0j
    scale = max(abs(s), w)
    for n, c in zip(series.orders, series.coefficients):
        den = s + sign * 1j * n * w
        if abs(den) < 1e-14 * scale:
            raise PoleError(f"Laplace transform evaluated at its pole n={n}", n=int(n))
        total += c / den
    return total


def corr_laplace_shifted(series: CorrelationSeries, s: complex, epsilon: float):
    """The four shifted transforms (C'_-, C'_+, C''_-, C''_+) at s."""
    return (
        corr_laplace(series, s - 1j * epsilon),
        corr_laplace(series, s + 1j * epsilon),
        corr_laplace(series, s - 1j * epsilon, conjugate=True),
        corr_laplace(series, s + 1j * epsilon, conjugate=True),
    )
