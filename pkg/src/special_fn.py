"""
Special Functions Module for the Trilinear Hawking Simulator

This module provides the special functions the analytic solvers depend on:
the Jacobi elliptic function dn (descending Landen / AGM scheme), the
log-scaled upper incomplete gamma function for integer orders, a ln(n!)
lookup table and an adaptive quadrature wrapper.

All functions are pure and stateless.
"""

import logging
import math
import warnings
from typing import Callable, Tuple, Union

import numpy as np
from scipy import integrate
from scipy.special import gammaln, logsumexp

from .errors import DomainError, NumericalError

# Configure logging
logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

# Largest n served from the precomputed ln(n!) table.
LN_FACTORIAL_TABLE_SIZE = 10_000
_LN_FACTORIAL_TABLE = gammaln(np.arange(LN_FACTORIAL_TABLE_SIZE + 1, dtype=float) + 1.0)

_AGM_MAX_ITERATIONS = 64
_AGM_TOLERANCE = 1e-16


def _validate_parameter(m: float) -> float:
    """Check the elliptic parameter m (modulus squared) lies in [0, 1]."""
    m = float(m)
    if not np.isfinite(m) or m < 0.0 or m > 1.0:
        raise DomainError(f"Elliptic parameter m must lie in [0, 1], got {m}")
    return m


def _agm_sequence(m: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Arithmetic-geometric mean sequences (a_n, c_n) started from (1, sqrt(1-m)).

    Args:
        m: Elliptic parameter in [0, 1)

    Returns:
        Tuple of arrays (a, c) with c_0 = sqrt(m)
    """
    a_values = [1.0]
    c_values = [math.sqrt(m)]
    a, b = 1.0, math.sqrt(1.0 - m)

    for _ in range(_AGM_MAX_ITERATIONS):
        if abs(c_values[-1]) <= _AGM_TOLERANCE * a:
            break
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        a_values.append(a)
        c_values.append(c)

    return np.array(a_values), np.array(c_values)


def complete_elliptic_k(m: float) -> float:
    """
    Complete elliptic integral of the first kind, K(m) = pi / (2 agm(1, sqrt(1-m))).

    Args:
        m: Elliptic parameter in [0, 1]

    Returns:
        K(m); infinite for m = 1
    """
    m = _validate_parameter(m)
    if m == 1.0:
        return math.inf

    a_values, _ = _agm_sequence(m)
    return math.pi / (2.0 * a_values[-1])


def jacobi_sn_cn_dn(u: ArrayLike, m: float) -> Tuple[ArrayLike, ArrayLike, ArrayLike]:
    """
    Jacobi elliptic functions sn, cn and dn by the descending Landen (AGM) scheme.

    Args:
        u: Real argument (scalar or array)
        m: Elliptic parameter (modulus squared) in [0, 1]

    Returns:
        Tuple (sn, cn, dn) with the shape of ``u``

    Raises:
        DomainError: If m lies outside [0, 1]
    """
    m = _validate_parameter(m)
    u_arr = np.asarray(u, dtype=float)

    if m == 0.0:
        sn, cn, dn = np.sin(u_arr), np.cos(u_arr), np.ones_like(u_arr)
    elif m == 1.0:
        sn, cn = np.tanh(u_arr), 1.0 / np.cosh(u_arr)
        dn = cn.copy()
    else:
        a_values, c_values = _agm_sequence(m)
        n_steps = len(a_values) - 1
        phi = (2.0**n_steps) * a_values[-1] * u_arr

        for n in range(n_steps, 0, -1):
            phi = 0.5 * (phi + np.arcsin(c_values[n] / a_values[n] * np.sin(phi)))

        sn = np.sin(phi)
        cn = np.cos(phi)
        # dn^2 = (1 - m) + m cn^2 has no cancellation where cn vanishes at odd multiples of K
        dn = np.sqrt((1.0 - m) + m * cn**2)

    if np.ndim(u) == 0:
        return float(sn), float(cn), float(dn)
    return sn, cn, dn


def jacobi_dn(u: ArrayLike, m: float) -> ArrayLike:
    """
    Jacobi elliptic function dn(u | m) in the parameter (modulus squared) convention.

    The value lies in [sqrt(1-m), 1] and is periodic in u with period 2K(m).

    Args:
        u: Real argument (scalar or array)
        m: Elliptic parameter in [0, 1]

    Returns:
        dn(u | m) with the shape of ``u``

    Raises:
        DomainError: If m lies outside [0, 1]
    """
    return jacobi_sn_cn_dn(u, m)[2]


def log_upper_gamma(a: int, x: float) -> float:
    """
    Natural log of the upper incomplete gamma function for integer order.

    Uses Gamma(a, x) = (a-1)! e^{-x} sum_{j<a} x^j / j!, summed in log space so
    that large orders and tiny arguments do not overflow.

    Args:
        a: Positive integer order
        x: Positive real argument

    Returns:
        ln Gamma(a, x)

    Raises:
        DomainError: If a is not a positive integer or x <= 0
    """
    if int(a) != a or a < 1:
        raise DomainError(f"Incomplete gamma order must be a positive integer, got {a}")
    if not np.isfinite(x) or x <= 0.0:
        raise DomainError(f"Incomplete gamma argument must be positive, got {x}")

    j = np.arange(int(a), dtype=float)
    log_terms = j * math.log(x) - gammaln(j + 1.0)
    return float(gammaln(a) - x + logsumexp(log_terms))


def ln_factorial(n: Union[int, np.ndarray]) -> ArrayLike:
    """
    ln(n!) from a precomputed table (n <= 10^4), falling back to lgamma beyond it.

    Args:
        n: Nonnegative integer or integer array

    Returns:
        ln(n!) with the shape of ``n``

    Raises:
        DomainError: If any n is negative
    """
    n_arr = np.asarray(n)
    if np.any(n_arr < 0):
        raise DomainError(f"ln_factorial requires n >= 0, got {n}")

    n_int = n_arr.astype(np.int64)
    if n_int.size and int(n_int.max()) <= LN_FACTORIAL_TABLE_SIZE:
        result = _LN_FACTORIAL_TABLE[n_int]
    else:
        result = gammaln(n_int.astype(float) + 1.0)

    if n_arr.ndim == 0:
        return float(result)
    return result


def quadrature(
    f: Callable[[float], float],
    lower: float,
    upper: float,
    abs_tol: float = 1e-10,
    rel_tol: float = 1e-12,
    limit: int = 200,
) -> float:
    """
    Adaptive Gauss-Kronrod integral of a real function over [lower, upper].

    Args:
        f: Integrand, continuous on the interval
        lower: Lower limit
        upper: Upper limit
        abs_tol: Absolute error target
        rel_tol: Relative error target
        limit: Maximum number of subintervals

    Returns:
        Integral estimate

    Raises:
        NumericalError: If the integrand returns a non-finite sample
    """
    if upper == lower:
        return 0.0

    def checked(t: float) -> float:
        value = f(t)
        if not np.isfinite(value):
            raise NumericalError(f"Non-finite integrand sample {value} at t={t}")
        return value

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", integrate.IntegrationWarning)
        value, error = integrate.quad(
            checked, lower, upper, epsabs=abs_tol, epsrel=rel_tol, limit=limit
        )

    if caught:
        logger.warning(
            f"Quadrature on [{lower}, {upper}] flagged: {caught[0].message} "
            f"(error estimate {error:.2e})"
        )

    return float(value)
