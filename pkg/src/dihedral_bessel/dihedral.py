r"""Generalized Bessel functions of dihedral groups.

Two independent routes are offered. The series route sums the Bessel-Jacobi
expansion directly (see :mod:`genseries`). The integral route, available
for integer ``nu``, applies the Jacobi product formula term by term, which
turns the series into an integral of the even-part closed form

.. math::

    g(z) = \Big(\frac{2}{R}\Big)^{p\nu} \sum_j (2j+\nu) I_{p(2j+\nu)}(R) C_{2j}^\nu(z)

against symmetric Beta measures. For the even group

.. math::

    D = \frac{\Gamma(p\nu+1)}{\nu} \iint g(z_{p\phi,p\theta}(u,v))\,
        \mu^{l_0}(du)\,\mu^{l_1}(dv),

and for the odd group (``v`` pinned to 1)

.. math::

    D = \frac{\Gamma(nk+1)}{k} \int g(z_{n\phi,n\theta}(u,1))\,\mu^{k-1/2}(du).

``g`` depends on the evaluation point only through ``z``, so one Chebyshev
fit per radius product ``R = rho r`` serves every quadrature node.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .closedform import ChebSeries, corollary_series, default_degree, series_limit_at_zero
from .core import (DEFAULT_CONTROL, ChamberError, DihedralParams, DomainError, EvalControl,
                   EvalReport, PolarPoint, QuadratureOrderError, check_chamber)
from .genseries import gbf_even_series, gbf_odd_series
from .quadrature import MAX_ORDER, rule_for
from .specfun import bessel_i_normalized

__all__ = [
    "ChamberError", "DihedralParams", "PolarPoint", "NormalizationConstants",
    "normalization_constants", "mixing_coordinate", "dkw_even_series", "dkw_odd_series",
    "dkw_even_integral", "dkw_odd_integral", "dkw_p2_integral", "dkw",
    "DEFAULT_QUAD_ORDER", "QUAD_TOL",
]

DEFAULT_QUAD_ORDER = 48
QUAD_TOL = 1e-9


@dataclass(frozen=True)
class NormalizationConstants:
    c_group: float
    c_product: float

    @property
    def ratio(self) -> float:
        return self.c_group / self.c_product


def normalization_constants(params: DihedralParams) -> NormalizationConstants:
    """Group constant ``c_{p,k}`` (or ``c_{n,k}``) and product-formula constant.

    Even: ``c(l1, l0) = 2^{l1+l0+1} Gamma(l1+1) Gamma(l0+1) / Gamma(l1+l0+1)``.
    Odd: ``c(k) = 2^{k+1} sqrt(pi) Gamma(k+1/2) / Gamma(k)``.
    """
    lg = math.lgamma
    if params.parity == "even":
        k0, k1, nu = params.k0, params.k1, params.nu
        c_group = math.exp(nu * math.log(2.0) + lg(params.gamma + 1.0) + lg(k1 + 0.5)
                           + lg(k0 + 0.5) - lg(nu + 1.0))
        l0, l1 = params.l0, params.l1
        c_product = math.exp((l1 + l0 + 1.0) * math.log(2.0) + lg(l1 + 1.0) + lg(l0 + 1.0)
                             - lg(l1 + l0 + 1.0))
    else:
        k, n = params.k0, params.order
        c_group = math.exp(k * math.log(2.0) + lg(n * k + 1.0) + 0.5 * math.log(math.pi)
                           + lg(k + 0.5) - lg(k + 1.0))
        c_product = math.exp((k + 1.0) * math.log(2.0) + 0.5 * math.log(math.pi)
                             + lg(k + 0.5) - lg(k))
    return NormalizationConstants(c_group, c_product)


def mixing_coordinate(phi: float, theta: float, u, v):
    """``z = u cos(theta) cos(phi) + v sin(theta) sin(phi)``; broadcasts over ``u, v``."""
    return u * math.cos(theta) * math.cos(phi) + v * math.sin(theta) * math.sin(phi)


def dkw_even_series(params: DihedralParams, x: PolarPoint, y: PolarPoint,
                    ctrl: EvalControl = DEFAULT_CONTROL, strict: bool = True) -> EvalReport:
    return gbf_even_series(params, x, y, ctrl, strict)


def dkw_odd_series(params: DihedralParams, x: PolarPoint, y: PolarPoint,
                   ctrl: EvalControl = DEFAULT_CONTROL, strict: bool = True) -> EvalReport:
    return gbf_odd_series(params, x, y, ctrl, strict)


def _require_integer_nu(params: DihedralParams) -> int:
    if not params.integer_nu:
        name = "k0 + k1" if params.parity == "even" else "k"
        raise DomainError(
            f"the integral route needs an integer nu = {name} >= 1, got {params.nu!r}")
    return int(round(params.nu))


class _EvenPart:
    """``g(z) = (2/R)^{p nu}`` times the even-index closed form, from one shared fit."""

    def __init__(self, nu: int, p: int, R: float, degree: int | None):
        self.R = R
        if R == 0.0:
            self.limit = series_limit_at_zero(nu, p)
            self.series = None
            self.err = 0.0
            return
        scale = (2.0 / R) ** (p * nu)
        self.series = corollary_series(nu, p, R, degree).scaled(scale)
        self.err = self.series.tail

    def __call__(self, z):
        if self.series is None:
            return np.full(np.shape(z), self.limit)
        return self.series(np.clip(z, -1.0, 1.0))


def _refit_each(nu, p, R, degree):
    # baseline without the shared fit: a fresh Chebyshev fit at every node
    def g(z):
        z = np.asarray(z, dtype=float)
        out = np.empty(z.shape)
        for idx, zz in np.ndenumerate(z):
            out[idx] = _EvenPart(nu, p, R, degree)(zz)
        return out
    return g


def _points(params, x, y, strict):
    if strict:
        check_chamber(params, x)
        check_chamber(params, y)
    m = params.angle_factor
    return x.radius * y.radius, m * x.angle, m * y.angle


def _with_order_check(quad, order: int, check: bool, tol: float):
    """Evaluate ``quad(order)``; compare with the doubled order, escalating once."""
    value = quad(order)
    if not check:
        return value, 0.0, order
    for _ in range(2):
        hi = min(2 * order, MAX_ORDER)
        fine = quad(hi)
        diff = abs(fine - value)
        if diff <= tol * max(1.0, abs(fine)) or hi == order:
            return value, diff, order
        order, value = hi, fine
    raise QuadratureOrderError(
        f"doubling the quadrature order to {2 * order} moved the result by {diff:.3e} "
        f"(> {tol:g}); the integrand is under-resolved")


def dkw_even_integral(params: DihedralParams, x: PolarPoint, y: PolarPoint,
                      quad_order: int = DEFAULT_QUAD_ORDER, *, strict: bool = True,
                      shared_fit: bool = True, degree: int | None = None,
                      check_order: bool = True, quad_tol: float = QUAD_TOL) -> EvalReport:
    """Even-group ``D_k^W`` from the double-integral representation (integer ``nu`` only).

    ``shared_fit=False`` refits the closed form at every node; it exists only
    to measure what the shared fit saves.
    """
    if params.parity != "even":
        raise DomainError("dkw_even_integral needs even-group parameters")
    nu = _require_integer_nu(params)
    p = params.order
    R, a, b = _points(params, x, y, strict)
    deg = degree or default_degree(R)
    part = _EvenPart(nu, p, R, deg)
    g = part if shared_fit else _refit_each(nu, p, R, deg)
    pref = math.exp(math.lgamma(p * nu + 1.0)) / nu
    ca, sa = math.cos(a), math.sin(a)
    cb, sb = math.cos(b), math.sin(b)

    def quad(order):
        ru = rule_for(params.l0, order)
        rv = rule_for(params.l1, order)
        z = ru.nodes[:, None] * (ca * cb) + rv.nodes[None, :] * (sa * sb)
        w = ru.weights[:, None] * rv.weights[None, :]
        return pref * math.fsum((w * g(z)).ravel())

    value, qerr, order = _with_order_check(quad, quad_order, check_order, quad_tol)
    return EvalReport(value=value, abs_error_est=qerr + pref * part.err, method="integral",
                      quad_order=order)


def dkw_odd_integral(params: DihedralParams, x: PolarPoint, y: PolarPoint,
                     quad_order: int = DEFAULT_QUAD_ORDER, *, strict: bool = True,
                     shared_fit: bool = True, degree: int | None = None,
                     check_order: bool = True, quad_tol: float = QUAD_TOL) -> EvalReport:
    """Odd-group ``D_k^W`` from the single-integral representation (integer ``k`` only)."""
    if params.parity != "odd":
        raise DomainError("dkw_odd_integral needs odd-group parameters")
    k = _require_integer_nu(params)
    n = params.order
    R, a, b = _points(params, x, y, strict)
    deg = degree or default_degree(R)
    part = _EvenPart(k, n, R, deg)
    g = part if shared_fit else _refit_each(k, n, R, deg)
    pref = math.exp(math.lgamma(n * k + 1.0)) / k
    c, s = math.cos(a) * math.cos(b), math.sin(a) * math.sin(b)

    def quad(order):
        ru = rule_for(k - 0.5, order)
        return pref * math.fsum(ru.weights * g(ru.nodes * c + s))

    value, qerr, order = _with_order_check(quad, quad_order, check_order, quad_tol)
    return EvalReport(value=value, abs_error_est=qerr + pref * part.err, method="integral",
                      quad_order=order)


def dkw_p2_integral(params: DihedralParams, x: PolarPoint, y: PolarPoint,
                    quad_order: int = DEFAULT_QUAD_ORDER, *, strict: bool = True,
                    check_order: bool = True, quad_tol: float = QUAD_TOL) -> EvalReport:
    r"""``p = 2``: ``D = iint i_{nu-1/2}(R sqrt((1+z)/2)) mu^{l0}(du) mu^{l1}(dv)``.

    No derivative is taken, so ``nu`` need not be an integer.
    """
    if params.parity != "even" or params.order != 2:
        raise DomainError("dkw_p2_integral needs the even group with p = 2")
    R, a, b = _points(params, x, y, strict)
    alpha = params.nu - 0.5
    ca, sa = math.cos(a), math.sin(a)
    cb, sb = math.cos(b), math.sin(b)
    ibessel = np.vectorize(lambda t: bessel_i_normalized(alpha, t), otypes=[float])

    def quad(order):
        ru = rule_for(params.l0, order)
        rv = rule_for(params.l1, order)
        z = ru.nodes[:, None] * (ca * cb) + rv.nodes[None, :] * (sa * sb)
        arg = R * np.sqrt(np.clip(0.5 * (1.0 + z), 0.0, 1.0))
        w = ru.weights[:, None] * rv.weights[None, :]
        return math.fsum((w * ibessel(arg)).ravel())

    value, qerr, order = _with_order_check(quad, quad_order, check_order, quad_tol)
    return EvalReport(value=value, abs_error_est=qerr + 4e-16 * abs(value), method="integral",
                      quad_order=order)


def integral_admissible(params: DihedralParams) -> bool:
    return params.integer_nu


def dkw(params: DihedralParams, x: PolarPoint, y: PolarPoint, method: str = "auto",
        ctrl: EvalControl = DEFAULT_CONTROL, quad_order: int = DEFAULT_QUAD_ORDER,
        strict: bool = True) -> EvalReport:
    """Dispatch on ``method``.

    ``"auto"`` always returns the series value; when the integral route is
    admissible its discrepancy from the series is folded into ``abs_error_est``.
    """
    series = dkw_even_series if params.parity == "even" else dkw_odd_series
    integral = dkw_even_integral if params.parity == "even" else dkw_odd_integral
    if method == "series":
        return series(params, x, y, ctrl, strict)
    if method == "integral":
        return integral(params, x, y, quad_order, strict=strict)
    if method == "auto":
        s = series(params, x, y, ctrl, strict)
        if not integral_admissible(params):
            return EvalReport(s.value, s.abs_error_est, "auto", s.terms_used, 0)
        i = integral(params, x, y, quad_order, strict=strict)
        err = max(s.abs_error_est, abs(s.value - i.value))
        return EvalReport(s.value, err, "auto", s.terms_used, i.quad_order)
    raise DomainError(f"method must be 'series', 'integral' or 'auto', got {method!r}")
