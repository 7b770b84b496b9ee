"""
Unit Tests for the Semiclassical Solver Module

The elliptic closed form for N_a is checked against an independent ODE
integration, which also pins the dn parameter convention.
"""

import math
import os
import sys

import numpy as np
import pytest

# Add repository root to path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from src.errors import DomainError
from src.fock_core import TrimodalState, coherent_weights, fock_weights
from src.semiclassical_solver import (
    SemiclassicalParams,
    beta_pm,
    factorization_diagnostic,
    pump_half_period,
    pump_occupation,
    pump_ode_oracle,
    signal_distribution,
    signal_occupation,
    theta,
)
from src.special_fn import complete_elliptic_k


class TestTurningPoints:
    """Test cases for beta_pm and SemiclassicalParams."""

    def test_reference_values(self):
        """beta_pm for Na0 = 9 and Na0 = 1."""
        assert beta_pm(9.0) == pytest.approx((9.952163, -0.452163), abs=1e-6)
        assert beta_pm(1.0) == pytest.approx((1.780776, -0.280776), abs=1e-6)

    def test_small_occupation_limit(self):
        """beta_pm -> (1/2, 0) as Na0 -> 0."""
        assert beta_pm(0.0) == pytest.approx((0.5, 0.0), abs=1e-15)

    def test_ordering(self):
        """beta_plus > Na0 > 0 > beta_minus."""
        for na0 in [0.1, 1.0, 9.0, 40.0]:
            beta_plus, beta_minus = beta_pm(na0)
            assert beta_plus > na0 > 0 > beta_minus

    def test_elliptic_parameters(self):
        """m and the argument scale for Na0 = 9."""
        params = SemiclassicalParams.from_occupation(9.0)
        assert params.m == pytest.approx(0.908483, abs=1e-6)
        assert params.scale == pytest.approx(3.2255738, abs=1e-7)

    def test_negative_occupation(self):
        """Negative Na0 is a domain error."""
        with pytest.raises(DomainError):
            beta_pm(-1.0)


class TestPumpOccupation:
    """Test cases for pump_occupation."""

    def test_initial_value(self):
        """N_a(0) = Na0 exactly."""
        assert pump_occupation(9.0, 0.0) == pytest.approx(9.0, abs=1e-14)

    @pytest.mark.parametrize("na0", [1.0, 9.0])
    def test_matches_ode_oracle(self, na0):
        """Closed form agrees with direct integration to 1e-6 on [0, 2]."""
        grid = np.linspace(0.0, 2.0, 201)
        closed = pump_occupation(na0, grid)
        oracle = pump_ode_oracle(na0, grid)
        assert np.max(np.abs(closed - oracle)) < 1e-6

    @pytest.mark.parametrize("na0", [1.0, 9.0])
    def test_minimum_is_lower_turning_point(self, na0):
        """The first minimum sits at beta_minus."""
        half = pump_half_period(na0)
        beta_minus = beta_pm(na0)[1]
        assert pump_occupation(na0, half) == pytest.approx(beta_minus, abs=1e-8)
        grid = np.linspace(0.0, 2.0 * half, 2001)
        assert pump_occupation(na0, grid).min() >= beta_minus - 1e-8

    def test_half_period(self):
        """scale * t_half = K(m)."""
        params = SemiclassicalParams.from_occupation(9.0)
        assert pump_half_period(9.0) * params.scale == pytest.approx(complete_elliptic_k(params.m))


class TestTheta:
    """Test cases for theta and signal_occupation."""

    def test_theta_at_origin(self):
        """theta(0) = 0."""
        assert theta(9.0, 0.0) == 0.0

    def test_constant_pump_limit(self):
        """Holding N_a gives sqrt(Na0) tau."""
        assert theta(9.0, 0.4, constant_pump=True) == pytest.approx(1.2)

    def test_small_time_series(self):
        """theta ~ 3 tau - tau^3/2 for Na0 = 9."""
        tau = 0.01
        value = theta(9.0, tau)
        assert value == pytest.approx(3 * tau - 0.5 * tau**3, abs=1e-9)
        assert value < 3 * tau

    def test_grid_accumulation(self):
        """Grid evaluation matches pointwise evaluation and is nondecreasing."""
        grid = np.linspace(0.0, 1.5, 16)
        values = theta(9.0, grid)
        assert np.all(np.diff(values) >= 0)
        for tau, value in zip(grid[::5], values[::5]):
            assert theta(9.0, float(tau)) == pytest.approx(value, abs=1e-9)

    def test_rejects_decreasing_grid(self):
        """Times must be nondecreasing."""
        with pytest.raises(DomainError):
            theta(9.0, np.array([0.2, 0.1]))

    def test_signal_growth(self):
        """N_b(0) = 0 and N_b ~ 9 tau^2 for small tau."""
        assert signal_occupation(9.0, 0.0) == 0.0
        assert signal_occupation(9.0, 0.01) == pytest.approx(9e-4, rel=1e-3)

    def test_never_exceeds_parametric(self):
        """Backreaction only slows the growth."""
        grid = np.linspace(0.0, 1.0, 21)
        semi = signal_occupation(9.0, grid)
        assert np.all(semi <= np.sinh(3.0 * grid) ** 2 + 1e-12)


class TestSignalDistribution:
    """Test cases for signal_distribution."""

    def test_vacuum_at_zero(self):
        """tau = 0 gives delta_{n,0}."""
        assert signal_distribution(9.0, 0.0).probs[0] == 1.0

    @pytest.mark.parametrize("tau", [0.05, 0.2, 0.4])
    def test_mean_matches_occupation(self, tau):
        """Distribution mean equals sinh^2(theta)."""
        dist = signal_distribution(9.0, tau)
        assert dist.mean == pytest.approx(signal_occupation(9.0, tau), abs=1e-9)

    def test_literal_argument_variant(self):
        """sqrt(N_a(tau)) tau differs from theta once the pump depletes."""
        literal = signal_distribution(9.0, 0.3, literal_argument=True)
        integrated = signal_distribution(9.0, 0.3)
        assert literal.mean != pytest.approx(integrated.mean, rel=1e-3)
        early = signal_distribution(9.0, 1e-3, literal_argument=True)
        assert early.mean == pytest.approx(signal_distribution(9.0, 1e-3).mean, rel=1e-5)


class TestFactorizationDiagnostic:
    """Test cases for factorization_diagnostic."""

    def test_fock_pump_has_no_variance(self):
        """A Fock pump starts with zero relative variance."""
        values = factorization_diagnostic([TrimodalState.initial(fock_weights(5))])
        assert values[0] == pytest.approx(0.0)

    def test_coherent_pump(self):
        """A coherent pump starts at 1/nbar."""
        values = factorization_diagnostic([TrimodalState.initial(coherent_weights(9.0))])
        assert values[0] == pytest.approx(1.0 / 9.0, rel=1e-9)

    def test_vacuum_gives_nan(self):
        """Undefined for an empty pump."""
        values = factorization_diagnostic([TrimodalState.initial(fock_weights(0))])
        assert math.isnan(values[0])


if __name__ == "__main__":
    pytest.main([__file__])
