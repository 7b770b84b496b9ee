"""
Unit Tests for the Full Solver Module

Includes the two-level analytic checks, conservation along coherent-pump
trajectories, agreement between the eigenbasis and adaptive methods and the
cross-validation against the dense tensor oracle.
"""

import math
import os
import sys

import numpy as np
import pytest

# Add repository root to path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from oracle_suite import DenseState, dense_evolve, dense_overlap
from src.errors import DomainError
from src.fock_core import (
    coherent_weights,
    fock_weights,
    interaction_expectation,
    mode_occupations,
    state_norm,
)
from src.full_solver import (
    Trajectory,
    evolve_sector,
    evolve_state,
    evolve_state_at,
    sector_generator,
)
from src.parametric_solver import occupation
from src.semiclassical_solver import signal_occupation
from src.shorttime_solver import rho_signal


class TestSectorGenerator:
    """Test cases for sector_generator."""

    def test_couplings(self):
        """g = (1) for s = 1 and (sqrt 2, 2) for s = 2."""
        assert np.allclose(sector_generator(1).couplings, [1.0])
        assert np.allclose(sector_generator(2).couplings, [math.sqrt(2.0), 2.0])
        assert sector_generator(0).couplings.size == 0

    def test_matrix_is_skew_symmetric(self):
        """L^T = -L with couplings on the subdiagonal."""
        L = sector_generator(4).matrix()
        assert np.allclose(L.T, -L)
        assert L[1, 0] == pytest.approx(2.0)
        assert sector_generator(4).dimension == 5


class TestEvolveSector:
    """Test cases for evolve_sector."""

    def test_two_level_exact(self):
        """s = 1 gives (cos tau, sin tau), so N_b = sin^2 tau over a full period."""
        grid = np.linspace(0.0, 2.0 * math.pi, 629)
        amps = evolve_sector(1, grid)
        assert np.max(np.abs(amps[:, 0] - np.cos(grid))) < 1e-12
        assert np.max(np.abs(amps[:, 1] ** 2 - np.sin(grid) ** 2)) < 1e-8

    def test_vacuum_sector_is_frozen(self):
        """s = 0 never changes."""
        amps = evolve_sector(0, [0.0, 1.0, 50.0])
        assert np.all(amps == 1.0)

    def test_three_level_series(self):
        """s = 2 at small tau gives N_b = 2 tau^2 + O(tau^4)."""
        tau = 1e-3
        amps = evolve_sector(2, [tau])[0]
        nb = amps[1] ** 2 + 2 * amps[2] ** 2
        assert nb == pytest.approx(2 * tau**2, rel=1e-5)

    def test_unitarity_long_times(self):
        """Norm stays 1 in a large sector up to tau = 50."""
        amps = evolve_sector(40, np.linspace(0.0, 50.0, 11))
        assert np.max(np.abs(np.sum(amps**2, axis=1) - 1.0)) < 1e-9

    def test_adaptive_matches_eigen(self):
        """The adaptive cross-check agrees with eigenbasis propagation."""
        grid = np.linspace(0.0, 2.0, 21)
        eigen = evolve_sector(12, grid)
        adaptive = evolve_sector(12, grid, tol=1e-11, method="adaptive")
        assert np.max(np.abs(eigen - adaptive)) < 1e-7

    @pytest.mark.parametrize("grid", [[0.2, 0.1], [-0.1, 0.3], []])
    def test_invalid_grid(self, grid):
        """Grids must be nonempty, nonnegative and strictly increasing."""
        with pytest.raises(DomainError):
            evolve_sector(3, grid)

    def test_unknown_method(self):
        """Only eigen and adaptive are offered."""
        with pytest.raises(DomainError):
            evolve_sector(3, [0.1], method="euler")


class TestEvolveState:
    """Test cases for evolve_state and Trajectory."""

    def setup_method(self):
        """Set up test fixtures."""
        self.grid = np.linspace(0.0, 3.0, 301)
        self.weights = coherent_weights(9.0)
        self.trajectory = evolve_state(self.weights, self.grid)

    def test_trajectory_shape(self):
        """One state per grid point."""
        assert isinstance(self.trajectory, Trajectory)
        assert len(self.trajectory) == 301
        assert len(list(self.trajectory.states())) == 301

    def test_conservation(self):
        """Norm, N_a + N_b, N_b - N_c and <H_int> conserved to 1e-9."""
        for state in self.trajectory.states():
            na, nb, nc = mode_occupations(state)
            assert state_norm(state) == pytest.approx(1.0, abs=1e-9)
            assert na + nb == pytest.approx(9.0, abs=1e-9)
            assert nb - nc == 0.0
            assert abs(interaction_expectation(state)) < 1e-9

    def test_small_time_growth(self):
        """N_b ~ 9 tau^2 at small tau."""
        nb = mode_occupations(evolve_state_at(self.weights, 1e-3))[1]
        assert nb == pytest.approx(9e-6, rel=1e-4)

    def test_backreaction(self):
        """N_a reaches a positive minimum and then revives."""
        na = np.array([mode_occupations(state)[0] for state in self.trajectory.states()])
        index = int(np.argmin(na))
        assert na[index] > 1.0
        assert 0 < index < len(na) - 1
        assert na[-1] > na[index] + 1.0

    def test_solver_agreement_and_divergence(self):
        """Parametric, semiclassical and full N_b agree early and split by tau = 0.5."""
        nb_full = np.array([mode_occupations(state)[1] for state in self.trajectory.states()])
        early = self.grid <= 0.1
        early_grid = self.grid[early][1:]
        full_early = nb_full[early][1:]
        assert np.all(np.abs(occupation(3.0, early_grid) - full_early) / full_early < 0.05)
        assert np.all(np.abs(signal_occupation(9.0, early_grid) - full_early) / full_early < 0.05)

        index = int(np.argmin(np.abs(self.grid - 0.5)))
        assert (occupation(3.0, 0.5) - nb_full[index]) / nb_full[index] >= 0.2

    def test_shorttime_agreement_inside_horizon(self):
        """Short-time N_b tracks the exact solution well inside the validity horizon."""
        P_s = np.abs(self.weights) ** 2
        for tau in [0.01, 0.02, 0.03]:
            full = mode_occupations(evolve_state_at(self.weights, tau))[1]
            short = rho_signal(P_s, tau).mean
            assert abs(short - full) / full < 0.01
        for tau in [0.05, 0.08]:
            full = mode_occupations(evolve_state_at(self.weights, tau))[1]
            short = rho_signal(P_s, tau).mean
            assert abs(short - full) / max(full, 0.01) < 0.05

    def test_workers_are_deterministic(self):
        """Thread-pool propagation gives bitwise identical amplitudes."""
        grid = self.grid[::10]
        serial = evolve_state(self.weights, grid, workers=1)
        parallel = evolve_state(self.weights, grid, workers=4)
        for a, b in zip(serial.sector_amps, parallel.sector_amps):
            assert np.array_equal(a, b)

    def test_fock_single_quantum(self):
        """Fock |1> gives N_b = sin^2 tau."""
        trajectory = evolve_state(fock_weights(1), self.grid)
        nb = np.array([mode_occupations(state)[1] for state in trajectory.states()])
        assert np.max(np.abs(nb - np.sin(self.grid) ** 2)) < 1e-8


class TestDenseOracle:
    """Cross-validation of sector propagation against the dense oracle."""

    def test_two_level_oracle(self):
        """|1,0,0> reaches N_b = 1 at pi/2 in the dense picture."""
        initial = DenseState.product([0.0, 1.0], (2, 2, 2))
        state = dense_evolve(initial, [math.pi / 2])[0]
        assert abs(state.tensor[0, 1, 1]) ** 2 == pytest.approx(1.0, abs=1e-6)

    def test_coherent_overlap(self):
        """Coherent nbar = 3 in a 12^3 box: overlap >= 1 - 1e-8 at tau = 2."""
        weights = coherent_weights(3.0, 12, tail_tol=1e-4)
        grid = [0.5, 1.0, 2.0]
        dense_states = dense_evolve(DenseState.product(weights, (12, 12, 12)), grid)
        trajectory = evolve_state(weights, grid)
        for index, dense in enumerate(dense_states):
            sector = DenseState.from_trimodal(trajectory.state_at(index), (12, 12, 12))
            assert dense_overlap(dense, sector) >= 1.0 - 1e-8

    def test_small_box_overlap(self):
        """nbar <= 3 truncated at S_max = 4 in a 5-level box."""
        weights = coherent_weights(1.0, 4, tail_tol=1e-2)
        grid = np.linspace(0.25, 2.0, 8)
        dense_states = dense_evolve(DenseState.product(weights, (4, 4, 4)), grid)
        trajectory = evolve_state(weights, grid)
        for index, dense in enumerate(dense_states):
            sector = DenseState.from_trimodal(trajectory.state_at(index), (4, 4, 4))
            assert dense_overlap(dense, sector) >= 1.0 - 1e-8


if __name__ == "__main__":
    pytest.main([__file__])
