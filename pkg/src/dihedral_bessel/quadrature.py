"""Gauss rules for Jacobi weights and the symmetric Beta probability measure.

``mu^alpha`` has density proportional to ``(1 - u^2)^(alpha - 1/2)`` on
``[-1, 1]``; rules built here carry weights that sum to one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import ConvergenceError, DomainError, NonFiniteError

MAX_ORDER = 512
_NEWTON_TOL = 1e-14


def _jacobi_and_derivative(n, a, b, x):
    """``P_n^{(a,b)}(x)`` and its derivative, vectorized over ``x``."""
    p_prev = np.ones_like(x)
    if n == 0:
        return p_prev, np.zeros_like(x)
    p = (a + 1.0) + 0.5 * (a + b + 2.0) * (x - 1.0)
    for k in range(2, n + 1):
        s = 2.0 * k + a + b
        c1 = 2.0 * k * (k + a + b) * (s - 2.0)
        c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b)
        c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s
        p_prev, p = p, (c2 * p - c3 * p_prev) / c1
    s = 2.0 * n + a + b
    dp = (n * ((a - b) - s * x) * p + 2.0 * (n + a) * (n + b) * p_prev) / (s * (1.0 - x * x))
    return p, dp


def _newton(n, a, b, x, max_iter=100):
    for _ in range(max_iter):
        p, dp = _jacobi_and_derivative(n, a, b, x)
        dx = p / dp
        x = x - dx
        if np.all(np.abs(dx) <= _NEWTON_TOL * np.maximum(1.0, np.abs(x))):
            return x, True
    return x, False


def _newton_deflated(n, a, b, max_iter=200):
    # one root at a time, dividing out the roots already found
    roots = []
    for k in range(n):
        r = -math.cos((2.0 * k + 1.0) * math.pi / (2.0 * n))
        if k > 0:
            r = 0.5 * (r + roots[-1])
        for _ in range(max_iter):
            p, dp = _jacobi_and_derivative(n, a, b, np.array([r]))
            s = sum(1.0 / (r - q) for q in roots)
            delta = float(p[0] / (dp[0] - p[0] * s))
            r -= delta
            if abs(delta) <= _NEWTON_TOL:
                break
        else:
            raise ConvergenceError(f"Gauss-Jacobi root {k} of {n} did not converge (a={a}, b={b})")
        roots.append(r)
    return np.sort(np.array(roots))


def _roots_ok(x, n):
    return (x.shape == (n,) and np.all(np.isfinite(x)) and np.all(np.abs(x) < 1.0)
            and np.all(np.diff(x) > 0))


def gauss_jacobi(n: int, a: float, b: float):
    """Nodes and weights of the ``n``-point Gauss rule for ``(1-x)^a (1+x)^b`` on ``[-1, 1]``.

    Newton iteration on the three-term recurrence, started from Chebyshev-type
    angles; falls back to root-by-root deflation if the simultaneous iteration
    lands on duplicate roots. Nodes are returned in increasing order.
    """
    if int(n) != n or n < 1 or n > MAX_ORDER:
        raise DomainError(f"order must be an integer in [1, {MAX_ORDER}], got {n!r}")
    if not (a > -1.0 and b > -1.0):
        raise DomainError(f"Jacobi exponents must exceed -1, got ({a}, {b})")
    n = int(n)
    k = np.arange(1, n + 1)
    theta = (k + 0.5 * a - 0.25) * math.pi / (n + 0.5 * (a + b + 1.0))
    x, ok = _newton(n, a, b, np.cos(theta))
    x = np.sort(x)
    if not (ok and _roots_ok(x, n)):
        x = _newton_deflated(n, a, b)
        x, _ = _newton(n, a, b, x, max_iter=3)
        x = np.sort(x)
        if not _roots_ok(x, n):
            raise ConvergenceError(f"Gauss-Jacobi node solver failed (n={n}, a={a}, b={b})")
    _, dp = _jacobi_and_derivative(n, a, b, x)
    log_c = ((a + b + 1.0) * math.log(2.0) + math.lgamma(n + a + 1.0) + math.lgamma(n + b + 1.0)
             - math.lgamma(n + a + b + 1.0) - math.lgamma(n + 1.0))
    w = math.exp(log_c) / ((1.0 - x * x) * dp * dp)
    # the large-argument lgamma terms carry ~1e-13 relative error as a common
    # factor; pin the total to the exactly known mass instead
    mass = math.exp((a + b + 1.0) * math.log(2.0) + math.lgamma(a + 1.0) + math.lgamma(b + 1.0)
                    - math.lgamma(a + b + 2.0))
    w *= mass / math.fsum(w)
    return x, w


def beta_mass(alpha: float) -> float:
    """Total mass of ``(1 - u^2)^(alpha - 1/2)`` on ``[-1, 1]``."""
    return math.sqrt(math.pi) * math.exp(math.lgamma(alpha + 0.5) - math.lgamma(alpha + 1.0))


@dataclass(frozen=True)
class QuadRule:
    alpha: float
    nodes: np.ndarray
    weights: np.ndarray
    order: int

    def integrate(self, f) -> float:
        return integrate_mu(f, self)


@lru_cache(maxsize=256)
def build_rule(alpha: float, order: int) -> QuadRule:
    """Gauss rule for the symmetric Beta probability measure ``mu^alpha``.

    Exact for polynomials of degree ``<= 2 order - 1``.
    """
    if not alpha > -0.5:
        raise DomainError(f"mu^alpha needs alpha > -1/2, got {alpha!r}")
    e = alpha - 0.5
    x, w = gauss_jacobi(order, e, e)
    # symmetrize: nodes come in +- pairs for a symmetric weight
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1]) / beta_mass(alpha)
    total = math.fsum(w)
    if abs(total - 1.0) > 1e-13:
        raise ConvergenceError(f"mu^{alpha} rule of order {order} has mass {total!r}")
    x.setflags(write=False)
    w.setflags(write=False)
    return QuadRule(alpha=float(alpha), nodes=x, weights=w, order=int(order))


def endpoint_rule() -> QuadRule:
    """Weak limit of ``mu^alpha`` as ``alpha -> -1/2``: half mass at each of ``-1, 1``."""
    x = np.array([-1.0, 1.0])
    w = np.array([0.5, 0.5])
    x.setflags(write=False)
    w.setflags(write=False)
    return QuadRule(alpha=-0.5, nodes=x, weights=w, order=1)


def rule_for(alpha: float, order: int) -> QuadRule:
    """``build_rule`` extended to the limiting case ``alpha = -1/2``."""
    if alpha == -0.5:
        return endpoint_rule()
    return build_rule(alpha, order)


def _values(f, nodes):
    try:
        vals = np.asarray(f(nodes), dtype=float)
    except (TypeError, ValueError):
        vals = None
    if vals is None or vals.shape != nodes.shape:
        vals = np.array([f(float(u)) for u in nodes], dtype=float)
    return vals


def integrate_mu(f, rule: QuadRule) -> float:
    """``sum(weights * f(nodes))``; ``f`` may be vectorized or scalar."""
    vals = _values(f, rule.nodes)
    if not np.all(np.isfinite(vals)):
        raise NonFiniteError("integrand returned non-finite values at quadrature nodes")
    return math.fsum(rule.weights * vals)


def integrate_mu2(f, rule_u: QuadRule, rule_v: QuadRule) -> float:
    """Tensor-product integral of ``f(u, v)`` against ``rule_u x rule_v``; ``f`` must broadcast."""
    u = rule_u.nodes[:, None]
    v = rule_v.nodes[None, :]
    vals = np.asarray(f(u, v), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise NonFiniteError("integrand returned non-finite values at quadrature nodes")
    return math.fsum((rule_u.weights[:, None] * rule_v.weights[None, :] * vals).ravel())


@lru_cache(maxsize=64)
def gauss_jacobi_interval(n: int, a: float, b: float, lo: float, hi: float):
    """Gauss rule for ``(hi - t)^a (t - lo)^b dt`` on ``[lo, hi]``."""
    x, w = gauss_jacobi(n, a, b)
    half = 0.5 * (hi - lo)
    t = lo + half * (x + 1.0)
    return t, w * half ** (a + b + 1.0)
