"""
Semiclassical Solver Module for the Trilinear Hawking Simulator

This module adds pump backreaction to the parametric picture. Factorizing the
pump number moments turns the conserved-quantity equations into a c-number
oscillator for N_a whose solution is a Jacobi elliptic dn function. The signal
then grows as a squeezed state with squeeze parameter

    theta(tau) = integral_0^tau sqrt(N_a(tau')) dtau'.

The pump phase stays zero for vacuum signal and idler, so only occupations
are evolved.
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Tuple, Union

import numpy as np
from scipy.integrate import solve_ivp

from .errors import DomainError, IntegratorError
from .fock_core import (
    TAIL_TOL,
    NumberDistribution,
    TrimodalState,
    mode_occupations,
    pump_number_variance,
)
from .parametric_solver import squeezed_distribution
from .special_fn import complete_elliptic_k, jacobi_dn, quadrature

# Configure logging
logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


def beta_pm(Na0: float) -> Tuple[float, float]:
    """
    Turning points beta_pm = (1 + 2 Na0 +- sqrt(1 + 12 Na0 + 4 Na0^2)) / 4.

    Args:
        Na0: Initial pump occupation

    Returns:
        Tuple (beta_plus, beta_minus) with beta_plus >= Na0 >= 0 >= beta_minus
    """
    if not Na0 >= 0:
        raise DomainError(f"Initial pump occupation must be nonnegative, got {Na0}")
    root = math.sqrt(1.0 + 12.0 * Na0 + 4.0 * Na0 * Na0)
    return 0.25 * (1.0 + 2.0 * Na0 + root), 0.25 * (1.0 + 2.0 * Na0 - root)


@dataclass(frozen=True)
class SemiclassicalParams:
    """
    Elliptic-solution parameters for an initial pump occupation.

    Attributes:
        Na0: Initial pump occupation
        beta_plus: Upper turning point
        beta_minus: Lower turning point (negative)
        m: Elliptic parameter (Na0 - beta_minus) / (beta_plus - beta_minus)
    """

    Na0: float
    beta_plus: float
    beta_minus: float
    m: float

    @classmethod
    def from_occupation(cls, Na0: float) -> "SemiclassicalParams":
        beta_plus, beta_minus = beta_pm(Na0)
        m = (Na0 - beta_minus) / (beta_plus - beta_minus)
        return cls(Na0, beta_plus, beta_minus, min(max(m, 0.0), 1.0))

    @property
    def scale(self) -> float:
        """Argument scale sqrt(beta_plus - beta_minus) of the dn function."""
        return math.sqrt(self.beta_plus - self.beta_minus)


def pump_occupation(Na0: float, tau: ArrayLike) -> ArrayLike:
    """
    Semiclassical pump occupation
    N_a(tau) = beta_plus + (Na0 - beta_plus) / dn^2(sqrt(beta_plus - beta_minus) tau | m).

    Oscillates between Na0 and beta_minus.

    Args:
        Na0: Initial pump occupation
        tau: Dimensionless time, scalar or array

    Returns:
        N_a(tau) with the shape of ``tau``
    """
    params = SemiclassicalParams.from_occupation(Na0)
    dn = jacobi_dn(params.scale * np.asarray(tau, dtype=float), params.m)
    result = params.beta_plus + (Na0 - params.beta_plus) / np.square(dn)
    if np.ndim(tau) == 0:
        return float(result)
    return result


def pump_half_period(Na0: float) -> float:
    """Time of the first pump minimum, K(m) / sqrt(beta_plus - beta_minus)."""
    params = SemiclassicalParams.from_occupation(Na0)
    return complete_elliptic_k(params.m) / params.scale


def theta(Na0: float, tau: ArrayLike, constant_pump: bool = False) -> ArrayLike:
    """
    Squeeze parameter theta(tau) = integral_0^tau sqrt(max(N_a(tau'), 0)) dtau'.

    N_a dips below zero near depletion, so the integrand is clamped at zero.
    For an array of times the integral is accumulated interval by interval.

    Args:
        Na0: Initial pump occupation
        tau: Dimensionless time, scalar or nondecreasing array
        constant_pump: Hold N_a at Na0, giving the parametric sqrt(Na0) tau

    Returns:
        theta(tau) with the shape of ``tau``
    """
    tau_arr = np.atleast_1d(np.asarray(tau, dtype=float))
    if tau_arr.size and tau_arr.min() < 0:
        raise DomainError("Dimensionless time must be nonnegative")
    if np.any(np.diff(tau_arr) < 0):
        raise DomainError("theta requires a nondecreasing time grid")

    if constant_pump:
        values = math.sqrt(Na0) * tau_arr
    else:

        def integrand(t: float) -> float:
            return math.sqrt(max(pump_occupation(Na0, t), 0.0))

        edges = np.concatenate(([0.0], tau_arr))
        pieces = [quadrature(integrand, lo, hi) for lo, hi in zip(edges[:-1], edges[1:])]
        values = np.cumsum(pieces)

    if np.ndim(tau) == 0:
        return float(values[0])
    return values


def signal_occupation(Na0: float, tau: ArrayLike, constant_pump: bool = False) -> ArrayLike:
    """Signal (and idler) occupation sinh^2(theta(tau))."""
    return np.sinh(theta(Na0, tau, constant_pump)) ** 2


def signal_distribution(
    Na0: float,
    tau: float,
    cutoff: Optional[int] = None,
    tail_tol: float = TAIL_TOL,
    literal_argument: bool = False,
) -> NumberDistribution:
    """
    Thermal signal distribution sech^2(x) tanh^{2n}(x).

    By default x = theta(tau), so the distribution mean equals
    signal_occupation. With literal_argument=True, x = sqrt(N_a(tau)) tau, which
    agrees with theta only while the pump stays undepleted.

    Args:
        Na0: Initial pump occupation
        tau: Dimensionless time
        cutoff: Largest occupation kept (default: tail-safe cutoff)
        tail_tol: Largest acceptable truncated mass
        literal_argument: Use sqrt(N_a(tau)) tau instead of theta(tau)

    Returns:
        NumberDistribution of the signal mode
    """
    if literal_argument:
        x = math.sqrt(max(pump_occupation(Na0, tau), 0.0)) * tau
    else:
        x = theta(Na0, tau)
    return squeezed_distribution(1.0, x, cutoff, tail_tol)


def pump_ode_oracle(
    Na0: float, tau_grid: np.ndarray, rtol: float = 1e-12, atol: float = 1e-12
) -> np.ndarray:
    """
    Integrate N_a'' = 2[3 N_a^2 - N_a (4 Na0 + 1) + Na0^2] with N_a(0) = Na0, N_a'(0) = 0.

    Independent of the elliptic closed form; used to check the dn convention.

    Args:
        Na0: Initial pump occupation
        tau_grid: Increasing evaluation times starting at or after 0
        rtol: Relative tolerance
        atol: Absolute tolerance

    Returns:
        N_a at each grid point

    Raises:
        IntegratorError: If the integrator fails
    """
    tau_grid = np.asarray(tau_grid, dtype=float)

    def rhs(_t: float, y: np.ndarray) -> np.ndarray:
        n, dn_dt = y
        return np.array([dn_dt, 2.0 * (3.0 * n * n - n * (4.0 * Na0 + 1.0) + Na0 * Na0)])

    solution = solve_ivp(
        rhs,
        (0.0, float(tau_grid[-1])),
        np.array([Na0, 0.0]),
        method="DOP853",
        t_eval=tau_grid,
        rtol=rtol,
        atol=atol,
    )
    if not solution.success:
        raise IntegratorError(f"Pump ODE integration failed: {solution.message}")
    return solution.y[0]


def factorization_diagnostic(states: Iterable[TrimodalState]) -> np.ndarray:
    """
    Relative pump number variance <dN_a^2> / <N_a>^2 along an exact trajectory.

    The semiclassical closure assumes this is small; it grows near depletion.
    NaN where <N_a> vanishes.
    """
    values = []
    for state in states:
        na = mode_occupations(state)[0]
        values.append(pump_number_variance(state) / na**2 if na > 0 else math.nan)
    return np.array(values)
