"""
Quantum Information Module for the Trilinear Hawking Simulator

This module turns reduced states into the diagnostics reported by the
simulator: von Neumann entropies, the fidelity of the signal mode against a
thermal state of equal mean, the information deficit relative to that thermal
state, effective temperatures and subspace dimensions, mutual informations
of the pure tri-mode state and quadrature squeezing of the pump.

Entropies are reported in nats. All functions are pure.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

import numpy as np
from scipy.linalg import eigh
from scipy.special import entr, xlogy

from .errors import CutoffError, DomainError, InvalidStateError
from .fock_core import EPS_PSD, TAIL_TOL, DensityMatrix, NumberDistribution

# Configure logging
logger = logging.getLogger(__name__)

MARGIN_TOL = 1e-10

StateLike = Union[DensityMatrix, NumberDistribution, np.ndarray]


def bose_occupation(T: float, omega: float = 1.0) -> float:
    """Bose-Einstein mean occupation 1/(e^{omega/T} - 1); 0 at T = 0."""
    if T < 0:
        raise DomainError(f"Temperature must be nonnegative, got {T}")
    if T == 0:
        return 0.0
    return 1.0 / math.expm1(omega / T)


def thermal_cutoff(nbar: float, tail_tol: float = TAIL_TOL) -> int:
    """
    Smallest cutoff n_max whose truncated mass x^{n_max+1} and truncated first
    moment x^{n_max+1} (n_max + 1 + nbar) both lie below tail_tol, x = nbar/(1+nbar).

    Args:
        nbar: Mean occupation (>= 0)
        tail_tol: Largest acceptable truncated mass

    Returns:
        Cutoff n_max

    Raises:
        CutoffError: If nbar/(1+nbar) rounds to one
    """
    if nbar < 0 or not np.isfinite(nbar):
        raise DomainError(f"Mean occupation must be a nonnegative number, got {nbar}")
    if nbar == 0:
        return 0
    log_ratio = math.log(nbar) - math.log1p(nbar)
    if log_ratio == 0.0:
        raise CutoffError(f"No finite cutoff holds a thermal state with nbar={nbar:.6g}")

    log_tol = math.log(tail_tol)
    n_max = max(0, int(math.floor(log_tol / log_ratio)))
    # Fixed point of the first-moment condition
    while True:
        needed = int(math.floor((log_tol - math.log(n_max + 1 + nbar)) / log_ratio))
        if needed <= n_max:
            return n_max
        n_max = needed


def thermal_distribution(
    nbar: float, cutoff: Optional[int] = None, tail_tol: float = TAIL_TOL
) -> NumberDistribution:
    """
    Geometric (thermal) distribution q_n = x^n / (1 + nbar), x = nbar / (1 + nbar).

    Args:
        nbar: Mean occupation (>= 0)
        cutoff: Largest occupation kept (default: tail-safe cutoff)
        tail_tol: Largest acceptable truncated mass

    Returns:
        NumberDistribution over 0..cutoff

    Raises:
        CutoffError: If the requested cutoff leaves a tail >= tail_tol
    """
    minimum = thermal_cutoff(nbar, tail_tol)
    if cutoff is None:
        cutoff = minimum
    elif cutoff < minimum:
        raise CutoffError(
            f"Thermal cutoff {cutoff} for nbar={nbar} leaves a tail above {tail_tol:.0e}"
        )

    probs = np.zeros(cutoff + 1)
    if nbar == 0:
        probs[0] = 1.0
    else:
        n = np.arange(cutoff + 1)
        probs = np.exp(n * (math.log(nbar) - math.log1p(nbar))) / (1.0 + nbar)
    return NumberDistribution(probs)


def thermal_distribution_from_temperature(
    T: float, omega: float = 1.0, cutoff: Optional[int] = None
) -> NumberDistribution:
    """Thermal distribution at temperature T for a mode of frequency omega."""
    return thermal_distribution(bose_occupation(T, omega), cutoff)


@dataclass(frozen=True)
class ThermalReference:
    """
    Thermal state of mean nbar, truncated where its tail falls below tail_tol.

    Attributes:
        nbar: Mean occupation
        cutoff: Truncation, at least the tail-safe cutoff for nbar
        tail_tol: Largest acceptable truncated mass
    """

    nbar: float
    cutoff: Optional[int] = None
    tail_tol: float = TAIL_TOL
    distribution: NumberDistribution = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        minimum = thermal_cutoff(self.nbar, self.tail_tol)
        cutoff = minimum if self.cutoff is None else max(int(self.cutoff), minimum)
        object.__setattr__(self, "cutoff", cutoff)
        object.__setattr__(
            self, "distribution", thermal_distribution(self.nbar, cutoff, self.tail_tol)
        )

    @property
    def probs(self) -> np.ndarray:
        return self.distribution.probs

    @property
    def purity(self) -> float:
        """Tr(sigma^2) evaluated on the truncated distribution."""
        return float(np.sum(self.probs**2))


def _eigenvalues(state: StateLike) -> np.ndarray:
    if isinstance(state, NumberDistribution):
        return state.probs
    if isinstance(state, DensityMatrix):
        return state.eigenvalues
    array = np.asarray(state)
    if array.ndim == 1:
        return NumberDistribution(array).probs
    return DensityMatrix(array).eigenvalues


def von_neumann_entropy(state: StateLike, eps_psd: float = EPS_PSD) -> float:
    """
    Von Neumann entropy -sum(lambda ln lambda) in nats, with 0 ln 0 = 0.

    Args:
        state: DensityMatrix, NumberDistribution, or a raw vector/matrix

    Returns:
        Entropy S >= 0

    Raises:
        InvalidStateError: If an eigenvalue is below -eps_psd
    """
    eigenvalues = _eigenvalues(state)
    if eigenvalues.size and eigenvalues.min() < -eps_psd:
        raise InvalidStateError(f"Negative eigenvalue {eigenvalues.min():.3e} in entropy")
    return float(np.sum(entr(np.clip(eigenvalues, 0.0, None))))


def thermal_entropy(nbar: float = 0.0, omega: float = 1.0, T: Optional[float] = None) -> float:
    """
    Entropy of a thermal oscillator state.

    With T given: -ln(1 - e^{-omega/T}) + (omega/T) / (e^{omega/T} - 1).
    Otherwise: (nbar+1) ln(nbar+1) - nbar ln(nbar), the same quantity expressed
    through the mean occupation.

    Args:
        nbar: Mean occupation (>= 0), used when T is None
        omega: Mode frequency
        T: Temperature, optional

    Returns:
        Thermal entropy in nats
    """
    if T is not None:
        if T < 0:
            raise DomainError(f"Temperature must be nonnegative, got {T}")
        if T == 0:
            return 0.0
        x = omega / T
        return float(-math.log(-math.expm1(-x)) + x / math.expm1(x))

    if nbar < 0:
        raise DomainError(f"Mean occupation must be nonnegative, got {nbar}")
    return float(xlogy(nbar + 1.0, nbar + 1.0) - xlogy(nbar, nbar))


def effective_temperature(nbar: float, omega_b: float = 1.0) -> float:
    """
    Temperature whose Bose-Einstein mean equals nbar: omega_b / ln(1 + 1/nbar).

    Returns 0 at the nbar = 0 boundary.
    """
    if nbar < 0:
        raise DomainError(f"Mean occupation must be nonnegative, got {nbar}")
    if nbar == 0:
        return 0.0
    return omega_b / math.log1p(1.0 / nbar)


def _is_diagonal(state) -> bool:
    if isinstance(state, (NumberDistribution, ThermalReference)):
        return True
    return not isinstance(state, DensityMatrix) and np.ndim(state) == 1


def _probabilities(state) -> np.ndarray:
    if isinstance(state, ThermalReference):
        return state.probs
    if isinstance(state, NumberDistribution):
        return state.probs
    return NumberDistribution(np.asarray(state, dtype=float)).probs


def _matrix(state, dim: int) -> np.ndarray:
    if _is_diagonal(state):
        probs = _probabilities(state)
        matrix = np.zeros((dim, dim), dtype=complex)
        matrix[np.arange(probs.size), np.arange(probs.size)] = probs
        return matrix
    elements = state.elements if isinstance(state, DensityMatrix) else DensityMatrix(state).elements
    matrix = np.zeros((dim, dim), dtype=complex)
    size = elements.shape[0]
    matrix[:size, :size] = elements
    return matrix


def _dimension(state) -> int:
    if _is_diagonal(state):
        return _probabilities(state).size
    if isinstance(state, DensityMatrix):
        return state.elements.shape[0]
    return np.asarray(state).shape[0]


def _drop_roundoff(eigenvalues: np.ndarray) -> np.ndarray:
    # Eigenvalues below EPS_PSD relative to the largest are taken as zero
    threshold = EPS_PSD * max(float(eigenvalues.max()), 0.0)
    return np.where(eigenvalues > threshold, eigenvalues, 0.0)


def fidelity(rho: StateLike, sigma: Union[StateLike, ThermalReference]) -> float:
    """
    Fidelity F = Tr sqrt(rho^{1/2} sigma rho^{1/2}), clipped to [0, 1].

    Diagonal inputs reduce to the Bhattacharyya sum sum_n sqrt(p_n q_n). A
    ThermalReference argument is zero-padded against the other state, so it is
    never truncated to the other state's cutoff. Two explicit states must share
    a dimension.

    Args:
        rho: Signal or pump state
        sigma: Reference state, typically a ThermalReference

    Returns:
        Fidelity in [0, 1]

    Raises:
        DomainError: On a dimension mismatch between two explicit states
    """
    dim_rho, dim_sigma = _dimension(rho), _dimension(sigma)
    padded = isinstance(rho, ThermalReference) or isinstance(sigma, ThermalReference)
    if dim_rho != dim_sigma and not padded:
        raise DomainError(f"Fidelity dimension mismatch: {dim_rho} vs {dim_sigma}")
    dim = max(dim_rho, dim_sigma)

    if _is_diagonal(rho) and _is_diagonal(sigma):
        p = np.zeros(dim)
        q = np.zeros(dim)
        p_src, q_src = _probabilities(rho), _probabilities(sigma)
        p[: p_src.size] = p_src
        q[: q_src.size] = q_src
        value = float(np.sum(np.sqrt(p * q)))
    else:
        rho_m = _matrix(rho, dim)
        sigma_m = _matrix(sigma, dim)
        lam, vecs = eigh(rho_m)
        sqrt_rho = (vecs * np.sqrt(_drop_roundoff(lam))) @ vecs.conj().T
        inner = sqrt_rho @ sigma_m @ sqrt_rho
        inner_lam = np.linalg.eigvalsh(0.5 * (inner + inner.conj().T))
        value = float(np.sum(np.sqrt(_drop_roundoff(inner_lam))))

    return min(max(value, 0.0), 1.0)


def information(rho_b: StateLike, nbar: Optional[float] = None) -> float:
    """
    Information content I = S_th(nbar) - S(rho_b) of a state relative to the
    thermal state of the same mean.

    Args:
        rho_b: Signal-mode state
        nbar: Mean occupation of rho_b (computed from the state when omitted)

    Returns:
        Information in nats; nonnegative up to rounding
    """
    if nbar is None:
        if isinstance(rho_b, DensityMatrix):
            nbar = rho_b.mean_number
        elif isinstance(rho_b, NumberDistribution):
            nbar = rho_b.mean
        else:
            nbar = NumberDistribution(np.asarray(rho_b, dtype=float)).mean
    return thermal_entropy(nbar) - von_neumann_entropy(rho_b)


def effective_dimension(nbar: float) -> float:
    """Inverse purity of the thermal state of mean nbar, 2 nbar + 1."""
    if nbar < 0:
        raise DomainError(f"Mean occupation must be nonnegative, got {nbar}")
    return 2.0 * nbar + 1.0


def composite_dimension(nbar_b: float) -> float:
    """Effective dimension of the signal-idler pair, (2 nbar_b + 1)^2."""
    return effective_dimension(nbar_b) ** 2


def dimension_crossing_occupation(nbar_a0: float) -> float:
    """
    Signal occupation where the pump and signal-idler effective dimensions meet.

    With n_a = nbar_a0 - n_b, 2 n_a + 1 = (2 n_b + 1)^2 gives
    n_b = (-3 + sqrt(9 + 8 nbar_a0)) / 4.
    """
    if nbar_a0 < 0:
        raise DomainError(f"Initial pump occupation must be nonnegative, got {nbar_a0}")
    return (-3.0 + math.sqrt(9.0 + 8.0 * nbar_a0)) / 4.0


def purity(state: StateLike) -> float:
    """Tr(rho^2)."""
    if isinstance(state, DensityMatrix):
        return state.purity
    return float(np.sum(_eigenvalues(state) ** 2))


def mutual_information_a_bc(S_a: float) -> float:
    """Pump versus signal-idler mutual information of a pure state, 2 S_a."""
    return 2.0 * S_a


def mutual_information_b_c(S_b: float, S_a: float) -> float:
    """Signal versus idler mutual information, 2 S_b - S_a (S_bc = S_a for a pure state)."""
    return 2.0 * S_b - S_a


def squeezing(rho_a: Union[DensityMatrix, np.ndarray], margin_tol: float = MARGIN_TOL) -> Tuple[float, float]:
    """
    Quadrature squeezing parameters q_pm = 4 Var(X_pm) - 1.

    X_+ = (a + a^+)/2 and X_- = (a - a^+)/(2i). Negative values indicate
    squeezing below the vacuum variance 1/4.

    Args:
        rho_a: Pump density matrix
        margin_tol: Largest population allowed in the two highest Fock levels

    Returns:
        Tuple (q_plus, q_minus)

    Raises:
        CutoffError: If the two highest levels are populated beyond margin_tol
    """
    rho = rho_a.elements if isinstance(rho_a, DensityMatrix) else DensityMatrix(rho_a).elements
    dim = rho.shape[0]
    diag = np.real(np.diag(rho))
    edge = float(diag[max(dim - 2, 0):].sum())
    if edge > margin_tol:
        raise CutoffError(
            f"Pump population {edge:.3e} in the top two Fock levels exceeds {margin_tol:.0e}"
        )

    n = np.arange(dim)
    mean_a = np.sum(np.sqrt(n[1:]) * np.diagonal(rho, offset=-1))
    mean_a2 = np.sum(np.sqrt(n[1:-1] * n[2:]) * np.diagonal(rho, offset=-2))
    mean_n = float(np.dot(n, diag))

    var_plus = 0.25 * (2.0 * mean_a2.real + 2.0 * mean_n + 1.0) - mean_a.real**2
    var_minus = 0.25 * (-2.0 * mean_a2.real + 2.0 * mean_n + 1.0) - mean_a.imag**2
    return float(4.0 * var_plus - 1.0), float(4.0 * var_minus - 1.0)
