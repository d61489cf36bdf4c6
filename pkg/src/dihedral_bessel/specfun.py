r"""Scalar special functions.

Modified Bessel functions of real order, Gegenbauer and Jacobi polynomials
and the Gauss hypergeometric function, all evaluated from their defining
series or three-term recurrences in double precision.

Supported ranges: Bessel arguments ``0 <= x <= 50`` and orders ``<= 200``;
polynomial degrees ``<= 200``.
"""
from __future__ import annotations

import math

import numpy as np

from .core import ConvergenceError, DomainError

MAX_BESSEL_ARG = 50.0
MAX_ORDER = 200.0
MAX_DEGREE = 200

_EPS = 2.0 ** -54
_SERIES_CAP = 2000


def pochhammer(a: float, n: int) -> float:
    """Rising factorial ``a (a+1) ... (a+n-1)``; equals 1 for ``n = 0``."""
    if int(n) != n or n < 0:
        raise DomainError(f"pochhammer needs a non-negative integer n, got {n!r}")
    out = 1.0
    for i in range(int(n)):
        out *= a + i
    return out


def rgamma(x: float) -> float:
    """Reciprocal gamma function, zero at the poles."""
    if x <= 0 and x == math.floor(x):
        return 0.0
    return 1.0 / math.gamma(x)


def _normalized_series(alpha: float, x: float, max_terms: int = _SERIES_CAP) -> float:
    # sum_m (x^2/4)^m / ((alpha+1)_m m!), all terms positive for alpha > -1
    y = 0.25 * x * x
    terms = [1.0]
    term = running = 1.0
    for m in range(max_terms):
        term *= y / ((alpha + 1.0 + m) * (m + 1.0))
        terms.append(term)
        running += term
        # ratios decrease from here on, so the tail is geometric
        q_next = y / ((alpha + 2.0 + m) * (m + 2.0))
        if q_next < 1.0 and term * q_next / (1.0 - q_next) <= _EPS * running:
            return math.fsum(terms)
    raise ConvergenceError(f"normalized Bessel series did not converge (alpha={alpha}, x={x})")


def bessel_i_normalized(alpha: float, x: float, max_terms: int = _SERIES_CAP) -> float:
    r"""Normalized modified Bessel function
    :math:`i_\alpha(x) = \sum_m (x/2)^{2m} / ((\alpha+1)_m m!)`.

    Satisfies ``i_alpha(x) = Gamma(alpha+1) (2/x)^alpha I_alpha(x)`` and
    ``i_alpha(0) = 1``.
    """
    if not alpha > -1.0:
        raise DomainError(f"bessel_i_normalized needs alpha > -1, got {alpha!r}")
    x = abs(x)
    if x > MAX_BESSEL_ARG:
        raise DomainError(f"argument {x} outside supported range [0, {MAX_BESSEL_ARG}]")
    if x == 0.0:
        return 1.0
    return _normalized_series(alpha, x, max_terms)


def scaled_power_over_gamma(order: float, x: float) -> float:
    """``(x/2)**order / Gamma(order+1)`` without intermediate overflow."""
    if x == 0.0:
        return 1.0 if order == 0 else 0.0
    h = 0.5 * x
    base = order - math.floor(order)
    steps = int(order - base)
    # (h^base / Gamma(base+1)) * prod_i h / (base + i): one rounding per factor
    val = math.pow(h, base) / math.gamma(base + 1.0)
    for i in range(1, steps + 1):
        val *= h / (base + i)
    if val != 0.0 and math.isfinite(val):
        return val
    return math.exp(order * math.log(h) - math.lgamma(order + 1.0))


def bessel_i(order: float, x: float) -> float:
    r"""Modified Bessel function of the first kind :math:`I_\nu(x)`.

    Negative integer orders are folded with ``I_{-n} = I_n``.
    """
    if order < 0:
        if order == math.floor(order):
            order = -order
        else:
            raise DomainError(f"negative non-integer order {order!r} not supported")
    if x < 0:
        raise DomainError(f"bessel_i needs x >= 0, got {x!r}")
    if order > MAX_ORDER:
        raise DomainError(f"order {order} above supported cap {MAX_ORDER}")
    if x == 0.0:
        return 1.0 if order == 0 else 0.0
    return scaled_power_over_gamma(order, x) * bessel_i_normalized(order, x)


def gegenbauer_c(j: int, nu: float, x: float) -> float:
    """Gegenbauer polynomial ``C_j^nu(x)`` by upward recurrence."""
    if int(j) != j or j < 0:
        raise DomainError(f"degree must be a non-negative integer, got {j!r}")
    if not nu > 0:
        raise DomainError(f"gegenbauer_c needs nu > 0, got {nu!r}")
    if j > MAX_DEGREE:
        raise DomainError(f"degree {j} above cap {MAX_DEGREE}")
    return float(gegenbauer_c_all(int(j), nu, x)[-1])


def gegenbauer_c_all(jmax: int, nu: float, x):
    """Values ``C_0^nu(x), ..., C_jmax^nu(x)`` stacked along the first axis.

    ``x`` may be a scalar or an array.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((jmax + 1,) + x.shape)
    out[0] = 1.0
    if jmax >= 1:
        out[1] = 2.0 * nu * x
    for n in range(1, jmax):
        out[n + 1] = (2.0 * (n + nu) * x * out[n] - (n + 2.0 * nu - 1.0) * out[n - 1]) / (n + 1.0)
    return out


def gegenbauer_at_one(j: int, nu: float) -> float:
    """``C_j^nu(1) = (2 nu)_j / j!``."""
    return math.exp(math.lgamma(2.0 * nu + j) - math.lgamma(2.0 * nu) - math.lgamma(j + 1.0))


def gegenbauer_w(j: int, nu: float, x: float) -> float:
    """Normalized Gegenbauer polynomial ``C_j^nu(x) / C_j^nu(1)``."""
    return gegenbauer_c(j, nu, x) / gegenbauer_c(j, nu, 1.0)


def jacobi_p_all(jmax: int, alpha: float, beta: float, x):
    """Classical Jacobi values ``P_0, ..., P_jmax`` at ``x`` (scalar or array)."""
    x = np.asarray(x, dtype=float)
    a, b = alpha, beta
    out = np.empty((jmax + 1,) + x.shape)
    out[0] = 1.0
    if jmax >= 1:
        out[1] = (a + 1.0) + 0.5 * (a + b + 2.0) * (x - 1.0)
    for n in range(2, jmax + 1):
        s = 2.0 * n + a + b
        c1 = 2.0 * n * (n + a + b) * (s - 2.0)
        c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b)
        c3 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * s
        out[n] = (c2 * out[n - 1] - c3 * out[n - 2]) / c1
    return out


def jacobi_p(j: int, alpha: float, beta: float, x: float) -> float:
    """Classical Jacobi polynomial ``P_j^{alpha,beta}(x)``."""
    _check_jacobi(j, alpha, beta)
    return float(jacobi_p_all(int(j), alpha, beta, x)[-1])


def jacobi_log_norm_sq(j: int, alpha: float, beta: float) -> float:
    """Log of the squared norm of ``P_j^{alpha,beta}`` under ``(1-x)^alpha (1+x)^beta dx``."""
    a, b = alpha, beta
    if j == 0:
        return ((a + b + 1.0) * math.log(2.0) + math.lgamma(a + 1.0) + math.lgamma(b + 1.0)
                - math.lgamma(a + b + 2.0))
    return ((a + b + 1.0) * math.log(2.0) - math.log(2.0 * j + a + b + 1.0)
            + math.lgamma(j + a + 1.0) + math.lgamma(j + b + 1.0)
            - math.lgamma(j + a + b + 1.0) - math.lgamma(j + 1.0))


def jacobi_orthonormal_all(jmax: int, alpha: float, beta: float, x):
    """Orthonormal Jacobi values ``p_0, ..., p_jmax`` at ``x``.

    Orthonormal with respect to the unnormalized weight ``(1-x)^alpha (1+x)^beta``
    on ``[-1, 1]``.
    """
    vals = jacobi_p_all(jmax, alpha, beta, x)
    scale = np.array([math.exp(-0.5 * jacobi_log_norm_sq(j, alpha, beta)) for j in range(jmax + 1)])
    return vals * scale.reshape((-1,) + (1,) * (vals.ndim - 1))


def jacobi_orthonormal(j: int, alpha: float, beta: float, x: float) -> float:
    """``j``-th orthonormal Jacobi polynomial (unnormalized weight convention)."""
    _check_jacobi(j, alpha, beta)
    return float(jacobi_orthonormal_all(int(j), alpha, beta, x)[-1])


def jacobi_sup_norm(j: int, alpha: float, beta: float) -> float:
    """Bound on ``max |P_j^{alpha,beta}|`` over ``[-1, 1]`` (exact when ``max(alpha, beta) >= -1/2``)."""
    q = max(alpha, beta)
    if q >= -0.5:
        return math.exp(math.lgamma(q + 1.0 + j) - math.lgamma(q + 1.0) - math.lgamma(j + 1.0))
    raise DomainError("sup-norm bound needs max(alpha, beta) >= -1/2")


def _check_jacobi(j, alpha, beta):
    if int(j) != j or j < 0 or j > MAX_DEGREE:
        raise DomainError(f"degree must be an integer in [0, {MAX_DEGREE}], got {j!r}")
    if not (alpha > -1.0 and beta > -1.0):
        raise DomainError(f"Jacobi parameters must exceed -1, got ({alpha}, {beta})")


def _hyp2f1_direct(a, b, c, x, max_terms):
    terms = [1.0]
    term = 1.0
    for m in range(max_terms):
        term *= (a + m) * (b + m) / ((c + m) * (m + 1.0)) * x
        terms.append(term)
        if term == 0.0:
            return math.fsum(terms)
        mm = m + 1
        if c + mm > 0:
            # majorant for every later ratio, nonincreasing in m
            q = abs(x) * (1.0 + abs(a - 1.0) / (mm + 1.0)) * (1.0 + abs(b - c) / (c + mm))
            if q < 1.0:
                tail = abs(term) * q / (1.0 - q)
                if tail <= _EPS * abs(math.fsum(terms)):
                    return math.fsum(terms)
    raise ConvergenceError(f"2F1({a}, {b}; {c}; {x}) did not converge in {max_terms} terms")


def hyp2f1(a: float, b: float, c: float, x: float, max_terms: int = _SERIES_CAP) -> float:
    """Gauss hypergeometric function ``2F1(a, b; c; x)`` for ``0 <= x <= 1``.

    Direct series for ``x <= 3/4``; above that the ``1 - x`` connection
    formula, which needs ``c - a - b`` non-integer. ``x = 1`` requires
    ``c - a - b > 0``.
    """
    if c <= 0 and c == math.floor(c):
        raise DomainError(f"c must not be a non-positive integer, got {c!r}")
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"hyp2f1 supports 0 <= x <= 1, got {x!r}")
    terminating = any(v <= 0 and v == math.floor(v) for v in (a, b))
    if x <= 0.75 or terminating:
        return _hyp2f1_direct(a, b, c, x, max_terms)
    s = c - a - b
    if s == math.floor(s):
        raise DomainError("integer c - a - b is not supported near x = 1")
    w = 1.0 - x
    first = math.gamma(c) * math.gamma(s) * rgamma(c - a) * rgamma(c - b)
    if first != 0.0:
        first *= _hyp2f1_direct(a, b, 1.0 - s, w, max_terms) if w > 0 else 1.0
    if w == 0.0:
        if s < 0:
            raise DomainError("2F1 diverges at x = 1 unless c - a - b > 0")
        return first
    second = math.gamma(c) * math.gamma(-s) * rgamma(a) * rgamma(b)
    if second != 0.0:
        second *= w ** s * _hyp2f1_direct(c - a, c - b, 1.0 + s, w, max_terms)
    return first + second


def hyp2f1_derivative(a: float, b: float, c: float, x: float) -> float:
    """``d/dx 2F1(a, b; c; x) = (ab/c) 2F1(a+1, b+1; c+1; x)``."""
    return a * b / c * hyp2f1(a + 1.0, b + 1.0, c + 1.0, x)
