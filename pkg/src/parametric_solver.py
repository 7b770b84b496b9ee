"""
Parametric Solver Module for the Trilinear Hawking Simulator

This module solves the fixed-amplitude parametric amplifier in closed form.
With the pump replaced by a classical amplitude A the signal and idler are
driven into a two-mode squeezed state whose single-mode reduction is exactly
thermal, so every observable here is an elementary hyperbolic function of A*tau.

Units: hbar = k_B = chi = 1, omega_b = omega_c = 1, omega_a = 2; temperatures
are reported in units of hbar*omega_b/k_B.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from .errors import CutoffError, DomainError
from .fock_core import TAIL_TOL, NumberDistribution
from .quantum_info import thermal_cutoff, thermal_entropy

# Configure logging
logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class ParametricInput:
    """Classical pump amplitude, dimensionless time and signal frequency."""

    A: float
    tau: float
    omega_b: float = 1.0

    def __post_init__(self):
        if not self.A > 0:
            raise DomainError(f"Pump amplitude A must be positive, got {self.A}")
        if not self.tau >= 0:
            raise DomainError(f"Dimensionless time must be nonnegative, got {self.tau}")
        if not self.omega_b > 0:
            raise DomainError(f"Signal frequency must be positive, got {self.omega_b}")

    @property
    def squeeze(self) -> float:
        """Squeeze parameter A*tau."""
        return self.A * self.tau


def _squeeze_parameter(A: float, tau: ArrayLike) -> ArrayLike:
    """Validated A*tau, scalar or array."""
    if np.ndim(tau):
        tau_arr = np.asarray(tau, dtype=float)
        ParametricInput(A, float(tau_arr.min()) if tau_arr.size else 0.0)
        return A * tau_arr
    ParametricInput(A, float(tau))
    return A * float(tau)


def occupation(A: float, tau: ArrayLike) -> ArrayLike:
    """
    Signal (and idler) occupation N_b = N_c = sinh^2(A tau).

    Args:
        A: Classical pump amplitude (> 0)
        tau: Dimensionless time, scalar or array (>= 0)

    Returns:
        sinh^2(A tau) with the shape of ``tau``
    """
    return np.sinh(_squeeze_parameter(A, tau)) ** 2


def bogoliubov_coefficients(A: float, tau: float) -> Tuple[float, float]:
    """Bogoliubov pair (u, v) = (cosh A tau, sinh A tau); u^2 - v^2 = 1."""
    x = _squeeze_parameter(A, tau)
    return math.cosh(x), math.sinh(x)


def disentangling_parameters(A: float, tau: float) -> Tuple[float, float]:
    """
    Parameters of the disentangled squeeze operator.

    exp[A tau (b^+ c^+ - b c)] = exp(Gamma K+) exp(-2 g K_z) exp(-Gamma K-)
    with Gamma = tanh(A tau) and g = ln cosh(A tau).

    Returns:
        Tuple (Gamma, g); g is evaluated as |x| + log1p(e^{-2|x|}) - ln 2
    """
    x = _squeeze_parameter(A, tau)
    gamma = math.tanh(x)
    g = abs(x) + math.log1p(math.exp(-2.0 * abs(x))) - math.log(2.0)
    return gamma, g


def required_cutoff(nbar: float, tail_tol: float = TAIL_TOL) -> int:
    """Tail-safe cutoff for a squeezed-state signal distribution of mean nbar."""
    return thermal_cutoff(nbar, tail_tol)


def squeezed_distribution(
    A: float, tau: float, cutoff: Optional[int] = None, tail_tol: float = TAIL_TOL
) -> NumberDistribution:
    """
    Signal-mode number distribution of the two-mode squeezed state.

    probs[n] = sech^2(A tau) tanh^{2n}(A tau), a geometric distribution with mean
    sinh^2(A tau).

    Args:
        A: Classical pump amplitude
        tau: Dimensionless time
        cutoff: Largest occupation kept (default: smallest tail-safe cutoff)
        tail_tol: Largest acceptable truncated mass

    Returns:
        NumberDistribution over 0..cutoff

    Raises:
        CutoffError: If the truncated tail is not below tail_tol
    """
    x = _squeeze_parameter(A, tau)
    if cutoff is None:
        try:
            nbar = math.sinh(x) ** 2
        except OverflowError as e:
            raise CutoffError(f"No finite cutoff holds a squeezed state with A*tau={x:.6g}") from e
        cutoff = thermal_cutoff(nbar, tail_tol)

    ratio = math.tanh(x) ** 2
    tail = ratio ** (cutoff + 1)
    if tail >= tail_tol:
        raise CutoffError(
            f"Squeezed-state tail {tail:.3e} above cutoff {cutoff} exceeds {tail_tol:.0e}"
        )

    n = np.arange(cutoff + 1)
    if ratio == 0.0:
        probs = np.zeros(cutoff + 1)
        probs[0] = 1.0
    else:
        # ln sech^2 x = -2 (x + ln(1 + e^{-2x}) - ln 2)
        log_sech2 = -2.0 * (x + math.log1p(math.exp(-2.0 * x)) - math.log(2.0))
        probs = np.exp(n * math.log(ratio) + log_sech2)

    logger.debug(f"Squeezed distribution A*tau={x:.6g}, cutoff={cutoff}, tail {tail:.3e}")
    return NumberDistribution(probs)


def temperature(A: float, tau: float, omega_b: float = 1.0) -> float:
    """
    Temperature of the thermal signal state, T = omega_b / (2 ln coth(A tau)).

    ln coth x is evaluated as log1p(e^{-2x}) - log(-expm1(-2x)), which stays
    accurate for both small and large x.

    Args:
        A: Classical pump amplitude
        tau: Dimensionless time
        omega_b: Signal frequency

    Returns:
        Temperature in units of hbar*omega_b/k_B; 0 at the tau = 0 boundary
    """
    ParametricInput(A, tau, omega_b)
    x = A * tau
    if x == 0.0:
        logger.debug("Parametric temperature evaluated at tau=0, returning boundary value 0")
        return 0.0

    log_coth = math.log1p(math.exp(-2.0 * x)) - math.log(-math.expm1(-2.0 * x))
    if log_coth == 0.0:
        return math.inf
    return omega_b / (2.0 * log_coth)


def signal_entropy(A: float, tau: ArrayLike) -> ArrayLike:
    """Entanglement entropy of the signal mode, the thermal entropy at sinh^2(A tau)."""
    nbar = occupation(A, tau)
    if np.ndim(nbar):
        return np.array([thermal_entropy(float(value)) for value in nbar])
    return thermal_entropy(float(nbar))
