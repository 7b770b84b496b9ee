"""
Full Solver Module for the Trilinear Hawking Simulator

This module propagates the interaction Hamiltonian H_I = i(a K+ - a^+ K-) exactly.
H_I preserves every sector, so each sector's (s+1)-dimensional amplitude
vector evolves independently under the real tridiagonal generator

    dc_n/dtau = g_{n-1} c_{n-1} - g_n c_{n+1},   g_n = (n+1) sqrt(s-n).

The default method rotates c_n = i^n d_n, which turns the generator into
-i H with H real symmetric tridiagonal, and propagates with the eigenbasis of
H at any tau without step error. An adaptive Runge-Kutta integration is kept
as a cross-check.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, List, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import eigh_tridiagonal

from .errors import DomainError, IntegratorError
from .fock_core import NORM_TOL, TrimodalState, sector_couplings

# Configure logging
logger = logging.getLogger(__name__)

METHODS = ("eigen", "adaptive")
IMAG_RESIDUE_TOL = 1e-12


@dataclass(frozen=True)
class SectorGenerator:
    """
    Tridiagonal generator of one sector.

    Attributes:
        s: Sector index
        couplings: g_n = (n+1) sqrt(s-n) for n = 0..s-1
    """

    s: int
    couplings: np.ndarray

    @property
    def dimension(self) -> int:
        return self.s + 1

    def matrix(self) -> np.ndarray:
        """Dense real skew-symmetric generator L with dc/dtau = L c."""
        L = np.zeros((self.dimension, self.dimension))
        idx = np.arange(self.s)
        L[idx + 1, idx] = self.couplings
        L[idx, idx + 1] = -self.couplings
        return L


def sector_generator(s: int) -> SectorGenerator:
    """Generator of sector s; the vacuum sector has no couplings."""
    couplings = sector_couplings(s)
    couplings.setflags(write=False)
    return SectorGenerator(s, couplings)


def _validate_grid(tau_grid: Sequence[float]) -> np.ndarray:
    grid = np.asarray(tau_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise DomainError("Time grid must be a nonempty 1-D sequence")
    if grid[0] < 0:
        raise DomainError(f"Time grid must start at tau >= 0, got {grid[0]}")
    if np.any(np.diff(grid) <= 0):
        raise DomainError("Time grid must be strictly increasing")
    return grid


def _evolve_eigen(generator: SectorGenerator, grid: np.ndarray) -> np.ndarray:
    eigenvalues, vectors = eigh_tridiagonal(np.zeros(generator.dimension), generator.couplings)
    phases = np.exp(-1j * np.outer(grid, eigenvalues)) * vectors[0, :]
    rotated = phases @ vectors.T
    amplitudes = rotated * (1j ** np.arange(generator.dimension))

    residue = float(np.max(np.abs(amplitudes.imag)))
    if residue > IMAG_RESIDUE_TOL:
        logger.warning(
            f"Sector {generator.s}: imaginary residue {residue:.2e} above {IMAG_RESIDUE_TOL:.0e}"
        )
    return amplitudes.real


def _evolve_adaptive(generator: SectorGenerator, grid: np.ndarray, tol: float) -> np.ndarray:
    L = generator.matrix()
    initial = np.zeros(generator.dimension)
    initial[0] = 1.0
    if grid[-1] == 0.0:
        return np.tile(initial, (grid.size, 1))

    solution = solve_ivp(
        lambda _t, c: L @ c,
        (0.0, float(grid[-1])),
        initial,
        method="DOP853",
        t_eval=grid,
        rtol=tol,
        atol=tol * 1e-2,
    )
    if not solution.success:
        raise IntegratorError(f"Sector {generator.s}: {solution.message}")
    return solution.y.T


def evolve_sector(
    s: int, tau_grid: Sequence[float], tol: float = 1e-10, method: str = "eigen"
) -> np.ndarray:
    """
    Amplitudes of sector s started from |s, 0, 0> at every grid time.

    Args:
        s: Sector index
        tau_grid: Strictly increasing times, tau >= 0
        tol: Local tolerance of the adaptive method
        method: "eigen" (exact eigenbasis propagation) or "adaptive"

    Returns:
        Real array of shape (len(tau_grid), s + 1)

    Raises:
        IntegratorError: If the adaptive method fails or the norm drifts beyond 1e-9
    """
    if method not in METHODS:
        raise DomainError(f"Unknown propagation method '{method}', expected one of {METHODS}")
    if not tol > 0:
        raise DomainError(f"Tolerance must be positive, got {tol}")
    grid = _validate_grid(tau_grid)
    generator = sector_generator(s)

    if s == 0:
        return np.ones((grid.size, 1))
    if method == "eigen":
        amplitudes = _evolve_eigen(generator, grid)
    else:
        amplitudes = _evolve_adaptive(generator, grid, tol)

    drift = float(np.max(np.abs(np.sum(amplitudes**2, axis=1) - 1.0)))
    if drift > NORM_TOL:
        raise IntegratorError(f"Sector {s}: norm drift {drift:.2e} exceeds {NORM_TOL:.0e}")
    return amplitudes


@dataclass(frozen=True)
class Trajectory:
    """
    Exact tri-mode evolution sampled on a time grid.

    Attributes:
        tau_grid: Strictly increasing sample times
        weights: Pump sector weights a_s
        sector_amps: Per sector, an array of shape (len(tau_grid), s + 1)
    """

    tau_grid: np.ndarray
    weights: np.ndarray
    sector_amps: Tuple[np.ndarray, ...]

    def __len__(self) -> int:
        return self.tau_grid.size

    def state_at(self, index: int) -> TrimodalState:
        """TrimodalState at grid point ``index``."""
        amps = tuple(block[index].astype(complex) for block in self.sector_amps)
        return TrimodalState(self.weights, amps)

    def states(self) -> Iterator[TrimodalState]:
        for index in range(len(self)):
            yield self.state_at(index)


def evolve_state(
    weights: np.ndarray,
    tau_grid: Sequence[float],
    tol: float = 1e-10,
    method: str = "eigen",
    workers: int = 1,
) -> Trajectory:
    """
    Evolve a pump superposition with vacuum signal and idler.

    Sectors are propagated independently, optionally on a thread pool, and
    collected in ascending sector order. Sectors with zero weight keep their
    initial amplitudes.

    Args:
        weights: Normalized pump sector weights a_s
        tau_grid: Strictly increasing times
        tol: Local tolerance of the adaptive method
        method: "eigen" or "adaptive"
        workers: Threads used across sectors

    Returns:
        Trajectory over the grid
    """
    weights = np.asarray(weights, dtype=complex)
    grid = _validate_grid(tau_grid)
    start = time.time()

    def run(s: int) -> np.ndarray:
        if weights[s] == 0:
            block = np.zeros((grid.size, s + 1))
            block[:, 0] = 1.0
            return block
        return evolve_sector(s, grid, tol, method)

    sectors = range(weights.size)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            blocks: List[np.ndarray] = list(pool.map(run, sectors))
    else:
        blocks = [run(s) for s in sectors]

    logger.debug(
        f"Propagated {weights.size} sectors over {grid.size} grid points "
        f"({method}, workers={workers}) in {time.time() - start:.3f}s"
    )
    for block in blocks:
        block.setflags(write=False)
    return Trajectory(grid, weights, tuple(blocks))


def evolve_state_at(
    weights: np.ndarray, tau: float, tol: float = 1e-10, method: str = "eigen"
) -> TrimodalState:
    """State at a single time, for root finding between grid points."""
    if tau == 0:
        return TrimodalState.initial(weights)
    return evolve_state(weights, [tau], tol, method).state_at(0)
