"""
Short-Time Solver Module for the Trilinear Hawking Simulator

This module evaluates the closed-form tri-mode state obtained by truncating the
Baker-Campbell-Hausdorff expansion of the evolution operator at second order.
In terms of the SU(1,1) generators K+ = b^+ c^+, K- = b c and
K_z = (b^+ b + c^+ c + 1)/2, each pump Fock component |M> evolves into

    |psi_M(tau)> = N_M(tau)^{-1/2} sum_n f_n(k, M) tau^n |M-n>_a |n>_b |n>_c,

    f_n(k, M) = [M! Gamma(2k+n) / (n! (M-n)! Gamma(2k))]^{1/2},

with k the Bargmann index (1/2 for vacuum signal and idler). Every quantity is
formed in log space so that M ~ 40 and tau ~ 100 neither overflow nor underflow.

The formula is formally valid for tau < 1/sqrt(kM) but is deliberately
evaluated past that horizon; callers flag rows outside it.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np
from scipy.special import gammaln, logsumexp

from .errors import DomainError
from .fock_core import (
    DensityMatrix,
    NumberDistribution,
    TrimodalState,
    reduced_pump,
)
from .special_fn import ln_factorial, log_upper_gamma

# Configure logging
logger = logging.getLogger(__name__)

VACUUM_BARGMANN_INDEX = 0.5


def _check_bargmann_index(k: float) -> None:
    two_k = 2.0 * k
    if two_k <= 0 or two_k != math.floor(two_k):
        raise DomainError(f"Bargmann index must be a positive half-integer, got {k}")


def log_f_coeffs(k: float, M: int) -> np.ndarray:
    """
    ln f_n(k, M) for n = 0..M.

    Args:
        k: Bargmann index (positive half-integer)
        M: Pump quanta of the sector

    Returns:
        Array of length M + 1 with ln f_0 = 0
    """
    _check_bargmann_index(k)
    if int(M) != M or M < 0:
        raise DomainError(f"Sector pump quanta must be a nonnegative integer, got {M}")
    M = int(M)
    n = np.arange(M + 1)
    log_f = 0.5 * (
        ln_factorial(M)
        + gammaln(2.0 * k + n)
        - ln_factorial(n)
        - ln_factorial(M - n)
        - gammaln(2.0 * k)
    )
    log_f[0] = 0.0
    return log_f


def f_coeff(k: float, M: int, n: int) -> float:
    """
    Short-time coefficient f_n(k, M); for k = 1/2 this is sqrt(M! / (M-n)!).

    Raises:
        DomainError: If n lies outside 0..M
    """
    if int(n) != n or n < 0 or n > M:
        raise DomainError(f"f_coeff requires 0 <= n <= M, got n={n}, M={M}")
    return float(math.exp(log_f_coeffs(k, M)[int(n)]))


def log_normalization(M: int, tau: float, k: float = VACUUM_BARGMANN_INDEX) -> float:
    """ln N_M(tau) = ln sum_n f_n^2 tau^{2n}, evaluated with logsumexp."""
    if tau < 0:
        raise DomainError(f"Dimensionless time must be nonnegative, got {tau}")
    if tau == 0:
        return 0.0
    log_f = log_f_coeffs(k, M)
    n = np.arange(log_f.size)
    return float(logsumexp(2.0 * log_f + 2.0 * n * math.log(tau)))


def log_normalization_gamma(M: int, tau: float) -> float:
    """
    ln N_M(tau) through the incomplete gamma form e^x tau^{2M} Gamma(M+1, x), x = tau^-2.

    Holds for k = 1/2 and tau > 0; used to cross-check log_normalization.
    """
    if tau <= 0:
        raise DomainError(f"Incomplete gamma normalization requires tau > 0, got {tau}")
    x = tau ** -2
    return x + 2.0 * M * math.log(tau) + log_upper_gamma(M + 1, x)


def sector_amplitudes(M: int, tau: float, k: float = VACUUM_BARGMANN_INDEX) -> np.ndarray:
    """
    Normalized amplitudes f_n tau^n / sqrt(N_M(tau)) of |M-n, n, n>.

    Args:
        M: Pump quanta of the sector
        tau: Dimensionless time (>= 0)
        k: Bargmann index

    Returns:
        Real nonnegative unit vector of length M + 1
    """
    log_f = log_f_coeffs(k, M)
    if tau < 0:
        raise DomainError(f"Dimensionless time must be nonnegative, got {tau}")
    if tau == 0:
        amplitudes = np.zeros(log_f.size)
        amplitudes[0] = 1.0
        return amplitudes

    n = np.arange(log_f.size)
    log_terms = log_f + n * math.log(tau)
    log_norm = logsumexp(2.0 * log_terms)
    return np.exp(log_terms - 0.5 * log_norm)


@dataclass(frozen=True)
class ShortTimeSector:
    """
    Short-time solution of one sector at a single time.

    Attributes:
        M: Pump quanta of the sector
        tau: Dimensionless time
        k: Bargmann index
    """

    M: int
    tau: float
    k: float = VACUUM_BARGMANN_INDEX
    f_coeffs: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "f_coeffs", np.exp(log_f_coeffs(self.k, self.M)))

    @property
    def log_normalization(self) -> float:
        return log_normalization(self.M, self.tau, self.k)

    @property
    def amplitudes(self) -> np.ndarray:
        return sector_amplitudes(self.M, self.tau, self.k)


def shorttime_state(weights: np.ndarray, tau: float) -> TrimodalState:
    """Full tri-mode short-time state for pump sector weights a_s."""
    weights = np.asarray(weights, dtype=complex)
    amps = tuple(sector_amplitudes(s, tau).astype(complex) for s in range(weights.size))
    return TrimodalState(weights, amps)


def _sector_probabilities(P_s: Union[NumberDistribution, np.ndarray]) -> np.ndarray:
    if isinstance(P_s, NumberDistribution):
        return P_s.probs
    return NumberDistribution(np.asarray(P_s, dtype=float)).probs


def rho_signal(P_s: Union[NumberDistribution, np.ndarray], tau: float) -> NumberDistribution:
    """
    Signal-mode distribution probs[i] = sum_{s >= i} P_s amp_s[i]^2.

    Args:
        P_s: Pump sector probabilities |a_s|^2
        tau: Dimensionless time

    Returns:
        NumberDistribution over 0..S_max
    """
    probs_s = _sector_probabilities(P_s)
    probs = np.zeros(probs_s.size)
    for s, weight in enumerate(probs_s):
        if weight == 0.0:
            continue
        probs[: s + 1] += weight * sector_amplitudes(s, tau) ** 2
    return NumberDistribution(probs)


def rho_pump(weights: np.ndarray, tau: float) -> DensityMatrix:
    """
    Pump-mode density matrix of the short-time state.

    rho_a[s-i, r-i] accumulates a_s a_r* amp_s[i] amp_r[i].
    """
    return reduced_pump(shorttime_state(weights, tau))


def longtime_limit(P_s: Union[NumberDistribution, np.ndarray]) -> NumberDistribution:
    """
    Asymptotic signal distribution: the pump statistics P_s themselves.

    Every sector ends in |0, s, s>, so the pump is left in vacuum and the
    signal inherits the initial pump distribution as a mixed state.
    """
    return NumberDistribution(_sector_probabilities(P_s))


def validity_horizon(k: float, M: float, chi: float = 1.0) -> float:
    """
    Formal validity time 1/(chi sqrt(k M)) of the short-time expansion.

    Returns +inf for M = 0.
    """
    if M < 0:
        raise DomainError(f"Pump quanta must be nonnegative, got {M}")
    if M == 0:
        return math.inf
    return 1.0 / (chi * math.sqrt(k * M))
