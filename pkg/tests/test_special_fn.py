"""
Unit Tests for the Special Functions Module

Covers the AGM Jacobi functions, the log-scaled upper incomplete gamma
function, the ln(n!) table and the quadrature wrapper.
"""

import math
import os
import sys

import numpy as np
import pytest
from scipy.special import ellipj, ellipk, gamma, gammaincc

# Add repository root to path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from src.errors import DomainError, NumericalError
from src.special_fn import (
    complete_elliptic_k,
    jacobi_dn,
    jacobi_sn_cn_dn,
    ln_factorial,
    log_upper_gamma,
    quadrature,
)


class TestJacobiFunctions:
    """Test cases for jacobi_dn and its companions."""

    def setup_method(self):
        """Set up test fixtures."""
        self.u_grid = np.linspace(-6.0, 6.0, 241)
        self.parameters = [0.0, 0.1, 0.5, 0.908483, 0.99, 1.0]

    def test_dn_at_origin_is_one(self):
        """dn(0, m) = 1 for every parameter."""
        for m in self.parameters:
            assert jacobi_dn(0.0, m) == pytest.approx(1.0, abs=1e-15)

    def test_dn_degenerate_parameter(self):
        """dn(u, 0) = 1 identically."""
        assert np.allclose(jacobi_dn(self.u_grid, 0.0), 1.0)

    def test_dn_at_unit_parameter(self):
        """dn(1, 1) = sech(1)."""
        assert jacobi_dn(1.0, 1.0) == pytest.approx(0.648054273663885, abs=1e-12)

    def test_matches_reference_implementation(self):
        """sn, cn, dn agree with scipy's ellipj."""
        for m in self.parameters:
            sn, cn, dn = jacobi_sn_cn_dn(self.u_grid, m)
            ref_sn, ref_cn, ref_dn, _ = ellipj(self.u_grid, m)
            assert np.max(np.abs(sn - ref_sn)) < 1e-12
            assert np.max(np.abs(cn - ref_cn)) < 1e-12
            assert np.max(np.abs(dn - ref_dn)) < 1e-12

    def test_dn_identity_with_sn(self):
        """dn^2 + m sn^2 = 1 with sn from an independent implementation."""
        for m in self.parameters:
            dn = jacobi_dn(self.u_grid, m)
            ref_sn = ellipj(self.u_grid, m)[0]
            assert np.max(np.abs(dn**2 + m * ref_sn**2 - 1.0)) < 1e-10

    def test_dn_range_and_period(self):
        """dn lies in [sqrt(1-m), 1] and has period 2K(m)."""
        m = 0.7
        dn = jacobi_dn(self.u_grid, m)
        assert dn.min() >= math.sqrt(1.0 - m) - 1e-12
        assert dn.max() <= 1.0 + 1e-12

        period = 2.0 * complete_elliptic_k(m)
        shifted = jacobi_dn(self.u_grid + period, m)
        assert np.max(np.abs(shifted - dn)) < 1e-11

    @pytest.mark.parametrize("m", [0.1, 0.5, 0.908483, 0.99])
    def test_dn_at_odd_quarter_periods(self, m):
        """dn reaches sqrt(1-m) at K and 3K and stays smooth just past K."""
        K = float(ellipk(m))
        for u in [K, 3.0 * K, K + 1e-12, 5.0 * K - 1e-9]:
            assert jacobi_dn(u, m) == pytest.approx(ellipj(u, m)[2], abs=1e-12)
        assert jacobi_dn(K, m) == pytest.approx(math.sqrt(1.0 - m), abs=1e-12)
        assert jacobi_dn(3.0 * K, m) >= math.sqrt(1.0 - m) - 1e-12

    def test_complete_elliptic_k(self):
        """K(m) matches scipy and diverges at m = 1."""
        for m in [0.0, 0.3, 0.908483]:
            assert complete_elliptic_k(m) == pytest.approx(ellipk(m), rel=1e-13)
        assert complete_elliptic_k(1.0) == math.inf

    def test_scalar_input_returns_float(self):
        """Scalar arguments give plain floats."""
        assert isinstance(jacobi_dn(0.5, 0.3), float)

    @pytest.mark.parametrize("m", [-0.1, 1.5, float("nan")])
    def test_parameter_outside_unit_interval(self, m):
        """m outside [0, 1] is a domain error."""
        with pytest.raises(DomainError):
            jacobi_dn(0.5, m)


class TestLogUpperGamma:
    """Test cases for log_upper_gamma."""

    def test_order_one_is_exponential(self):
        """Gamma(1, x) = e^-x."""
        for x in [1e-3, 0.5, 7.0, 250.0]:
            assert log_upper_gamma(1, x) == pytest.approx(-x, abs=1e-12)

    def test_order_two_at_one(self):
        """Gamma(2, 1) = 2/e."""
        assert math.exp(log_upper_gamma(2, 1.0)) == pytest.approx(2.0 / math.e, rel=1e-13)

    def test_small_argument_limit(self):
        """Gamma(a, 0+) approaches (a-1)!."""
        assert log_upper_gamma(10, 1e-12) == pytest.approx(math.log(math.factorial(9)), rel=1e-10)

    def test_recurrence(self):
        """Gamma(a+1, x) = a Gamma(a, x) + x^a e^-x."""
        for a in range(1, 12):
            for x in [0.2, 1.0, 3.5, 9.0]:
                lhs = math.exp(log_upper_gamma(a + 1, x))
                rhs = a * math.exp(log_upper_gamma(a, x)) + x**a * math.exp(-x)
                assert lhs == pytest.approx(rhs, rel=1e-10)

    def test_matches_regularized_gamma(self):
        """Agrees with scipy's regularized upper gamma."""
        for a in [1, 3, 8, 20]:
            for x in [0.5, 4.0, 30.0]:
                expected = math.log(gammaincc(a, x) * gamma(a))
                assert log_upper_gamma(a, x) == pytest.approx(expected, rel=1e-10)

    def test_large_order_tiny_argument_stays_finite(self):
        """Log scaling survives tau ~ 0.1 normalizations (x = 100, a = 41)."""
        value = log_upper_gamma(41, 100.0)
        assert np.isfinite(value)

    @pytest.mark.parametrize("a, x", [(0, 1.0), (2.5, 1.0), (3, 0.0), (3, -1.0)])
    def test_domain_errors(self, a, x):
        """Non-integer or nonpositive orders and x <= 0 are rejected."""
        with pytest.raises(DomainError):
            log_upper_gamma(a, x)


class TestLnFactorial:
    """Test cases for ln_factorial."""

    def test_small_values(self):
        """ln 0! = ln 1! = 0 and ln 9! = ln 362880."""
        assert ln_factorial(0) == 0.0
        assert ln_factorial(1) == 0.0
        assert ln_factorial(9) == pytest.approx(math.log(362880), rel=1e-14)

    def test_vector_input(self):
        """Array input keeps its shape."""
        values = ln_factorial(np.arange(6))
        expected = [math.log(math.factorial(n)) for n in range(6)]
        assert values.shape == (6,)
        assert np.allclose(values, expected, rtol=1e-14, atol=0)

    def test_beyond_table(self):
        """Values past the table fall back to lgamma."""
        assert ln_factorial(20000) == pytest.approx(math.lgamma(20001), rel=1e-14)

    def test_negative_rejected(self):
        """Negative arguments are a domain error."""
        with pytest.raises(DomainError):
            ln_factorial(-1)


class TestQuadrature:
    """Test cases for the quadrature wrapper."""

    def test_constant_integrand(self):
        """Integral of sqrt(9) over [0, 1] is 3."""
        assert quadrature(lambda t: 3.0, 0.0, 1.0) == pytest.approx(3.0, abs=1e-12)

    def test_linear_integrand(self):
        """Integral of t over [0, 1] is 1/2."""
        assert quadrature(lambda t: t, 0.0, 1.0) == pytest.approx(0.5, abs=1e-10)

    def test_empty_interval(self):
        """Equal limits give zero without evaluating f."""
        assert quadrature(lambda t: 1.0 / 0.0, 2.0, 2.0) == 0.0

    def test_non_finite_sample_raises(self):
        """A non-finite integrand sample is a numerical error."""
        with pytest.raises(NumericalError):
            quadrature(lambda t: math.nan, 0.0, 1.0)


if __name__ == "__main__":
    pytest.main([__file__])
