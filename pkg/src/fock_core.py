"""
Fock Core Module for the Trilinear Hawking Simulator

This module represents pure pump-signal-idler states through the conserved
sector structure of the trilinear Hamiltonian. With signal and idler starting
in vacuum, the Manley-Rowe invariants confine the state to sectors

    sector s = span{ |s-n>_a |n>_b |n>_c : 0 <= n <= s },

so a state is a weight per sector plus one amplitude vector per sector. The
module builds initial states, reduces them to single-mode density matrices
and evaluates conserved expectation values.

Values are immutable after construction and every operation is a pure
function; reductions run in ascending sector order.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from scipy.stats import poisson

from .errors import CutoffError, DomainError, InvalidStateError
from .special_fn import ln_factorial

# Configure logging
logger = logging.getLogger(__name__)

TAIL_TOL = 1e-12
NORM_TOL = 1e-9
EPS_PSD = 1e-10
HERMITIAN_TOL = 1e-10
NEGATIVE_PROB_TOL = 1e-14

# Sector label: total pump quanta of the progenitor state |s>_a |0>_b |0>_c.
SectorIndex = int


def sector_basis(s: SectorIndex) -> List[Tuple[int, int, int]]:
    """Occupation triples (n_a, n_b, n_c) spanning sector s, ordered by n_b."""
    if s < 0:
        raise DomainError(f"Sector index must be nonnegative, got {s}")
    return [(s - n, n, n) for n in range(s + 1)]


def sector_couplings(s: SectorIndex) -> np.ndarray:
    """
    Matrix elements g_n = <s-n-1, n+1, n+1| a K+ |s-n, n, n> = (n+1) sqrt(s-n).

    Args:
        s: Sector index

    Returns:
        Array of length s (empty for the frozen vacuum sector)
    """
    if s < 0:
        raise DomainError(f"Sector index must be nonnegative, got {s}")
    n = np.arange(s, dtype=float)
    return (n + 1.0) * np.sqrt(s - n)


def _read_only(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class NumberDistribution:
    """Probability vector over Fock occupation numbers (a diagonal density matrix)."""

    probs: np.ndarray
    tolerance: float = NORM_TOL

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        if probs.ndim != 1 or probs.size == 0:
            raise InvalidStateError("NumberDistribution requires a nonempty 1-D vector")
        if not np.all(np.isfinite(probs)):
            raise InvalidStateError("NumberDistribution contains non-finite entries")
        if probs.min() < -NEGATIVE_PROB_TOL:
            raise InvalidStateError(
                f"Negative probability {probs.min():.3e} in NumberDistribution"
            )
        total = probs.sum()
        if abs(total - 1.0) > self.tolerance:
            raise InvalidStateError(
                f"NumberDistribution sums to {total:.12f}, expected 1"
            )
        object.__setattr__(self, "probs", _read_only(np.clip(probs, 0.0, None)))

    @property
    def cutoff(self) -> int:
        """Largest occupation number represented."""
        return self.probs.size - 1

    @property
    def mean(self) -> float:
        """Mean occupation sum_n n p_n."""
        return float(np.dot(np.arange(self.probs.size), self.probs))

    @property
    def variance(self) -> float:
        n = np.arange(self.probs.size)
        return float(np.dot(n * n, self.probs) - self.mean**2)

    def padded(self, length: int) -> np.ndarray:
        """Probabilities zero-padded to ``length`` entries."""
        if length < self.probs.size:
            raise CutoffError(
                f"Cannot pad a distribution of length {self.probs.size} to {length}"
            )
        out = np.zeros(length)
        out[: self.probs.size] = self.probs
        return out


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite single-mode density matrix."""

    elements: np.ndarray
    tolerance: float = NORM_TOL
    eps_psd: float = EPS_PSD
    eigenvalues: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        rho = np.asarray(self.elements, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] == 0:
            raise InvalidStateError(f"Density matrix must be square, got {rho.shape}")
        if np.max(np.abs(rho - rho.conj().T)) > HERMITIAN_TOL:
            raise InvalidStateError("Density matrix is not Hermitian")
        trace = float(np.real(np.trace(rho)))
        if abs(trace - 1.0) > self.tolerance:
            raise InvalidStateError(f"Density matrix trace is {trace:.12f}, expected 1")

        rho = 0.5 * (rho + rho.conj().T)
        eigenvalues = np.linalg.eigvalsh(rho)
        if eigenvalues[0] < -self.eps_psd:
            raise InvalidStateError(
                f"Density matrix has negative eigenvalue {eigenvalues[0]:.3e}"
            )
        object.__setattr__(self, "elements", _read_only(rho))
        object.__setattr__(self, "eigenvalues", _read_only(eigenvalues))

    @property
    def cutoff(self) -> int:
        return self.elements.shape[0] - 1

    @property
    def purity(self) -> float:
        """Tr(rho^2)."""
        return float(np.sum(np.abs(self.elements) ** 2))

    @property
    def mean_number(self) -> float:
        diag = np.real(np.diag(self.elements))
        return float(np.dot(np.arange(diag.size), diag))

    def diagonal(self) -> NumberDistribution:
        """Occupation-number distribution on the diagonal."""
        return NumberDistribution(np.real(np.diag(self.elements)), self.tolerance)


@dataclass(frozen=True)
class TrimodalState:
    """
    Pure pump-signal-idler state stored per conserved sector.

    The state is sum_s a_s sum_n c^(s)_n |s-n>_a |n>_b |n>_c.

    Attributes:
        weights: Complex amplitude a_s per sector, s = 0..S_max
        sector_amps: One complex amplitude vector of length s+1 per sector
        tolerance: Allowed deviation of the global norm from one
    """

    weights: np.ndarray
    sector_amps: Tuple[np.ndarray, ...]
    tolerance: float = NORM_TOL

    def __post_init__(self):
        weights = np.asarray(self.weights, dtype=complex)
        if weights.ndim != 1 or weights.size == 0:
            raise InvalidStateError("TrimodalState weights must be a nonempty vector")
        if len(self.sector_amps) != weights.size:
            raise InvalidStateError(
                f"Expected {weights.size} sector vectors, got {len(self.sector_amps)}"
            )

        amps = []
        for s, vector in enumerate(self.sector_amps):
            vector = np.asarray(vector, dtype=complex)
            if vector.shape != (s + 1,):
                raise InvalidStateError(
                    f"Sector {s} amplitude vector has shape {vector.shape}, expected ({s + 1},)"
                )
            amps.append(_read_only(vector))

        object.__setattr__(self, "weights", _read_only(weights))
        object.__setattr__(self, "sector_amps", tuple(amps))

        norm = state_norm(self)
        if abs(norm - 1.0) > self.tolerance:
            raise InvalidStateError(f"TrimodalState norm is {norm:.12f}, expected 1")

    @classmethod
    def initial(cls, weights: np.ndarray) -> "TrimodalState":
        """Pump in the superposition ``weights`` with signal and idler in vacuum."""
        weights = np.asarray(weights, dtype=complex)
        amps = []
        for s in range(weights.size):
            vector = np.zeros(s + 1, dtype=complex)
            vector[0] = 1.0
            amps.append(vector)
        return cls(weights, tuple(amps))

    @property
    def cutoff(self) -> int:
        """S_max, the largest sector carried."""
        return self.weights.size - 1

    @property
    def sector_probabilities(self) -> np.ndarray:
        """P_s = |a_s|^2."""
        return np.abs(self.weights) ** 2

    def amplitude_matrix(self) -> np.ndarray:
        """Psi[s, n] = a_s c^(s)_n, zero for n > s."""
        size = self.weights.size
        psi = np.zeros((size, size), dtype=complex)
        for s, vector in enumerate(self.sector_amps):
            psi[s, : s + 1] = self.weights[s] * vector
        return psi

    def schmidt_matrix(self) -> np.ndarray:
        """
        Phi[p, i] = a_{p+i} c^(p+i)_i, the coefficient of |p>_a |i>_b |i>_c.

        Since signal and idler are locked together, Phi is the full pump versus
        signal-idler coefficient matrix: rho_a = Phi Phi^dagger.
        """
        psi = self.amplitude_matrix()
        size = self.weights.size
        phi = np.zeros((size, size), dtype=complex)
        for s in range(size):
            i = np.arange(s + 1)
            phi[s - i, i] = psi[s, i]
        return phi


def state_norm(state: TrimodalState) -> float:
    """Global norm sum_s |a_s|^2 sum_n |c^(s)_n|^2."""
    total = 0.0
    for s, vector in enumerate(state.sector_amps):
        total += float(np.abs(state.weights[s]) ** 2 * np.sum(np.abs(vector) ** 2))
    return total


def default_cutoff(nbar: float) -> int:
    """Default sector cutoff ceil(nbar + 10 sqrt(nbar) + 10) for a coherent pump."""
    if nbar < 0:
        raise DomainError(f"Mean occupation must be nonnegative, got {nbar}")
    return int(math.ceil(nbar + 10.0 * math.sqrt(nbar) + 10.0))


def poisson_tail_mass(nbar: float, s_max: int) -> float:
    """Probability mass of Poisson(nbar) above s_max."""
    if nbar == 0.0:
        return 0.0
    return float(poisson.sf(s_max, nbar))


def coherent_weights(
    nbar: float, s_max: Optional[int] = None, tail_tol: float = TAIL_TOL
) -> np.ndarray:
    """
    Sector weights of a coherent pump state with real positive amplitude.

    a_s = e^{-nbar/2} alpha^s / sqrt(s!), alpha = sqrt(nbar), truncated at S_max
    and renormalized.

    Args:
        nbar: Mean pump occupation (>= 0)
        s_max: Sector cutoff (default: ceil(nbar + 10 sqrt(nbar) + 10))
        tail_tol: Largest acceptable truncated probability mass

    Returns:
        Complex weight vector of length S_max + 1

    Raises:
        DomainError: If nbar is negative
        CutoffError: If the truncated tail mass reaches tail_tol
    """
    if nbar < 0 or not np.isfinite(nbar):
        raise DomainError(f"Coherent amplitude requires nbar >= 0, got {nbar}")
    if s_max is None:
        s_max = default_cutoff(nbar)
    if s_max < 0:
        raise CutoffError(f"Sector cutoff must be nonnegative, got {s_max}")

    tail = poisson_tail_mass(nbar, s_max)
    if tail >= tail_tol:
        raise CutoffError(
            f"Coherent tail mass {tail:.3e} above S_max={s_max} exceeds {tail_tol:.0e}"
        )

    weights = np.zeros(s_max + 1, dtype=complex)
    if nbar == 0.0:
        weights[0] = 1.0
        return weights

    s = np.arange(s_max + 1)
    log_amp = -0.5 * nbar + 0.5 * s * math.log(nbar) - 0.5 * ln_factorial(s)
    amplitudes = np.exp(log_amp)
    weights[:] = amplitudes / np.linalg.norm(amplitudes)

    logger.debug(f"Coherent weights nbar={nbar}, S_max={s_max}, tail mass {tail:.3e}")
    return weights


def fock_weights(m: int, s_max: Optional[int] = None) -> np.ndarray:
    """
    Sector weights of the pump Fock state |M>.

    Args:
        m: Pump quanta
        s_max: Sector cutoff (default M + 2, leaving room for two-step ladder moments)

    Returns:
        Complex weight vector delta_{s, M}
    """
    if int(m) != m or m < 0:
        raise DomainError(f"Fock pump requires a nonnegative integer, got {m}")
    m = int(m)
    if s_max is None:
        s_max = m + 2
    if s_max < m:
        raise CutoffError(f"Sector cutoff {s_max} is below the Fock level {m}")

    weights = np.zeros(s_max + 1, dtype=complex)
    weights[m] = 1.0
    return weights


def reduced_signal(state: TrimodalState) -> NumberDistribution:
    """
    Signal-mode reduction; identical to the idler reduction.

    Tracing pump and idler forces n = n' and s = s', so the result is diagonal:
    probs[n] = sum_s |a_s|^2 |c^(s)_n|^2.

    Args:
        state: Normalized tri-mode state

    Returns:
        NumberDistribution over 0..S_max
    """
    psi = state.amplitude_matrix()
    probs = np.sum(np.abs(psi) ** 2, axis=0)
    return NumberDistribution(probs, state.tolerance)


def reduced_pump(state: TrimodalState) -> DensityMatrix:
    """
    Pump-mode reduced density matrix.

    rho_a[p, q] = sum over (s, r, i) with s-i = p, r-i = q of a_s a_r* c^(s)_i c^(r)*_i.

    Args:
        state: Normalized tri-mode state

    Returns:
        DensityMatrix over pump occupations 0..S_max
    """
    phi = state.schmidt_matrix()
    return DensityMatrix(phi @ phi.conj().T, state.tolerance)


def mode_occupations(state: TrimodalState) -> Tuple[float, float, float]:
    """
    Mean occupations (N_a, N_b, N_c).

    N_b = N_c and N_a + N_b = sum_s s |a_s|^2 for every state in this representation.

    Args:
        state: Normalized tri-mode state

    Returns:
        Tuple (Na, Nb, Nc)
    """
    psi2 = np.abs(state.amplitude_matrix()) ** 2
    size = psi2.shape[0]
    s = np.arange(size)[:, None]
    n = np.arange(size)[None, :]
    nb = float(np.sum(n * psi2))
    na = float(np.sum((s - n) * psi2))
    return na, nb, nb


def pump_number_variance(state: TrimodalState) -> float:
    """<N_a^2> - <N_a>^2."""
    psi2 = np.abs(state.amplitude_matrix()) ** 2
    size = psi2.shape[0]
    na_values = np.arange(size)[:, None] - np.arange(size)[None, :]
    mean = float(np.sum(na_values * psi2))
    return float(np.sum(na_values**2 * psi2)) - mean**2


def interaction_expectation(state: TrimodalState) -> complex:
    """
    <a K+ - a^+ K->, with K+ = b^+ c^+ and K- = b c.

    Both operators preserve the sector label, so only diagonal sector blocks
    contribute. Zero for any state with real sector amplitudes.
    """
    total = 0.0 + 0.0j
    for s, vector in enumerate(state.sector_amps):
        if s == 0:
            continue
        g = sector_couplings(s)
        raising = np.sum(np.conj(vector[1:]) * g * vector[:-1])
        total += np.abs(state.weights[s]) ** 2 * (raising - np.conj(raising))
    return complex(total)


def bargmann_index(m_bc: int) -> float:
    """SU(1,1) Bargmann index k = (|M_bc| + 1) / 2; 1/2 for vacuum signal and idler."""
    return 0.5 * (abs(m_bc) + 1)
