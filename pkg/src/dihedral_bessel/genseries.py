r"""Direct truncated evaluation of the Bessel-Gegenbauer and Bessel-Jacobi series.

Every series here is summed to an index ``J`` picked in advance from an
explicit majorant ``b_j >= |term_j|`` whose successive ratios are bounded by a
nonincreasing ``q(j)``; the neglected tail is then at most
``b_{J+1} / (1 - q(J+1))``. The majorants use

* ``i_m(R) <= exp(R^2 / (4 (m+1)))`` for the normalized Bessel function,
* ``|C_j^nu(u)| <= C_j^nu(1)`` on ``[-1, 1]``,
* the endpoint maximum of the classical Jacobi polynomial.

Since the majorant does not depend on the evaluation point, the number of
terms is fixed before any polynomial is evaluated, and the polynomial values
come from one upward recurrence.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (DEFAULT_CONTROL, ConvergenceError, DihedralParams, DomainError, EvalControl,
                   EvalReport, PolarPoint, check_chamber, check_positive_int, check_sign)
from .specfun import (bessel_i, bessel_i_normalized, gegenbauer_c_all, jacobi_log_norm_sq,
                      jacobi_orthonormal_all)

_ROUND = 2.0 ** -52


@dataclass(frozen=True)
class SeriesTerm:
    index: int
    value: float
    tail_bound_after: float


@dataclass(frozen=True)
class _Plan:
    terms: int
    tail: float


def _plan(log_bound, ratio, ctrl: EvalControl, what: str) -> _Plan:
    """Smallest ``J`` with certified tail after index ``J`` at most ``ctrl.tail_tol``.

    ``log_bound(j)`` is ``log b_j`` (``-inf`` for a vanishing majorant) and
    ``ratio(j)`` bounds ``b_{i+1} / b_i`` for every ``i >= j``.
    """
    for J in range(ctrl.max_terms):
        lb = log_bound(J + 1)
        if lb == -math.inf:
            return _Plan(J + 1, 0.0)
        q = ratio(J + 1)
        if q < 1.0:
            tail = math.exp(lb) / (1.0 - q) * (1.0 + 1e-12)
            if tail <= ctrl.tail_tol:
                return _Plan(J + 1, tail)
    raise ConvergenceError(
        f"{what}: tail bound still above {ctrl.tail_tol:g} after {ctrl.max_terms} terms")


def _order_sensitivity(orders, R: float) -> np.ndarray:
    """Relative change of ``(R/2)^m / Gamma(m+1)`` per ulp of a rounded order ``m``."""
    m = np.asarray(orders, dtype=float)
    if R == 0.0:
        return np.zeros_like(m)
    return m * (abs(math.log(0.5 * R)) + np.log1p(m))


def _report(terms, plan: _Plan, orders=None, R: float = 0.0) -> EvalReport:
    terms = np.asarray(terms, dtype=float)
    value = math.fsum(terms)
    # each term is a product of a Bessel value and polynomial values from a
    # j-step recurrence; allow (16 + j) ulps for it, plus the final rounding.
    # A non-representable Bessel order adds its own rounding sensitivity.
    weight = 16.0 + np.arange(len(terms))
    if orders is not None:
        weight = weight + _order_sensitivity(orders, R)
    rounding = _ROUND * (math.fsum(weight * np.abs(terms)) + abs(value))
    return EvalReport(value=value, abs_error_est=plan.tail + rounding, method="series",
                      terms_used=plan.terms)


def _check_R(R):
    if not (R >= 0.0 and math.isfinite(R)):
        raise DomainError(f"R must be a finite number >= 0, got {R!r}")


def _check_u(u):
    if not -1.0 <= u <= 1.0:
        raise DomainError(f"u = cos(zeta) must lie in [-1, 1], got {u!r}")


def _check_nu(nu):
    if not (nu > 0.0 and math.isfinite(nu)):
        raise DomainError(f"nu must be positive, got {nu!r}")


def _log_bessel_majorant(m: float, R: float) -> float:
    # log of (R/2)^m exp(R^2/(4(m+1))) / Gamma(m+1)
    if R == 0.0:
        return 0.0 if m == 0 else -math.inf
    return m * math.log(0.5 * R) + R * R / (4.0 * (m + 1.0)) - math.lgamma(m + 1.0)


def _bessel_ratio(m: float, step: int, R: float) -> float:
    # bound on (R/2)^{m+step} Gamma(m+1) / ((R/2)^m Gamma(m+step+1)), ignoring the
    # exponential factor, which only decreases with m
    out = 1.0
    h = 0.5 * R
    for i in range(1, step + 1):
        out *= h / (m + i)
    return out


def _log_gegenbauer_one(j: int, nu: float) -> float:
    return math.lgamma(2.0 * nu + j) - math.lgamma(2.0 * nu) - math.lgamma(j + 1.0)


def _gegenbauer_step(j: int, nu: float) -> float:
    # nonincreasing bound on C_{j+1}^nu(1) / C_j^nu(1) = (2 nu + j)/(j + 1)
    return max(1.0, (2.0 * nu + j) / (j + 1.0))


# ---------------------------------------------------------------- f series

def _scaled_bessel_factors(nu: float, p: int, R: float, J: int) -> np.ndarray:
    """``(2/R)^{p nu} I_{p(j+nu)}(R)`` for ``j = 0..J-1``, finite at ``R = 0``."""
    h = 0.5 * R
    out = np.empty(J)
    # math.gamma is good to a few ulps; exp(-lgamma) would lose |lgamma| ulps
    g = p * nu + 1.0
    lead = 1.0 / math.gamma(g) if g < 170.0 else math.exp(-math.lgamma(g))
    for j in range(J):
        m = p * (j + nu)
        out[j] = lead * bessel_i_normalized(m, R)
        # (R/2)^{p} / ((m+1)...(m+p)) moves the power-over-gamma prefactor to j+1
        for i in range(1, p + 1):
            lead *= h / (m + i)
    return out


def _f_plan(nu: float, p: int, R: float, ctrl: EvalControl) -> _Plan:
    def log_bound(j):
        m = p * (j + nu)
        lb = _log_bessel_majorant(m, R)
        if lb == -math.inf:
            return lb
        # divide out (R/2)^{p nu}: the fused prefactor is (2/R)^{p nu}
        return (math.log(j + nu) + lb - p * nu * math.log(0.5 * R)
                + _log_gegenbauer_one(j, nu))

    def ratio(j):
        return ((1.0 + 1.0 / (j + nu)) * _gegenbauer_step(j, nu)
                * _bessel_ratio(p * (j + nu), p, R))

    return _plan(log_bound, ratio, ctrl, "f series")


def f_series(nu: float, p: int, sign, R: float, u: float,
             ctrl: EvalControl = DEFAULT_CONTROL) -> EvalReport:
    r"""``f^{+-}_{nu,p}(R, u) = (2/R)^{p nu} sum_j (j+nu) I_{p(j+nu)}(R) C_j^nu(u) (+-1)^j``.

    The ``(2/R)^{p nu}`` prefactor is fused into each Bessel factor, so
    ``R = 0`` returns the limit ``nu / Gamma(p nu + 1)``.
    """
    _check_nu(nu)
    p = check_positive_int("p", p)
    sg = check_sign(sign)
    _check_R(R)
    _check_u(u)
    plan = _f_plan(nu, p, R, ctrl)
    J = plan.terms
    j = np.arange(J)
    c = gegenbauer_c_all(J - 1, nu, u)
    terms = (j + nu) * _scaled_bessel_factors(nu, p, R, J) * c * (float(sg) ** j)
    return _report(terms, plan, p * (j + nu), R)


def f_series_terms(nu: float, p: int, sign, R: float, u: float,
                   ctrl: EvalControl = DEFAULT_CONTROL) -> list[SeriesTerm]:
    """The individual terms of :func:`f_series`, each with the tail bound after it."""
    _check_nu(nu)
    p = check_positive_int("p", p)
    sg = check_sign(sign)
    _check_R(R)
    _check_u(u)
    plan = _f_plan(nu, p, R, ctrl)
    J = plan.terms
    c = gegenbauer_c_all(J - 1, nu, u)
    s = _scaled_bessel_factors(nu, p, R, J)
    return [SeriesTerm(j, float((j + nu) * s[j] * c[j] * sg ** j), _f_tail_after(nu, p, R, j))
            for j in range(J)]


def _f_tail_after(nu, p, R, j):
    m = p * (j + 1 + nu)
    lb = _log_bessel_majorant(m, R)
    if lb == -math.inf:
        return 0.0
    lb += math.log(j + 1 + nu) - p * nu * math.log(0.5 * R) + _log_gegenbauer_one(j + 1, nu)
    q = (1.0 + 1.0 / (j + 1 + nu)) * _gegenbauer_step(j + 1, nu) * _bessel_ratio(m, p, R)
    if q >= 1.0:
        return math.inf
    return math.exp(lb) / (1.0 - q) * (1.0 + 1e-12)


def corollary_lhs(nu: int, p: int, R: float, u: float,
                  ctrl: EvalControl = DEFAULT_CONTROL) -> EvalReport:
    """``sum_j (2j+nu) I_{p(2j+nu)}(R) C_{2j}^nu(u)``, summed over even Gegenbauer indices only."""
    nu = check_positive_int("nu", nu)
    p = check_positive_int("p", p)
    _check_R(R)
    _check_u(u)

    def log_bound(j):
        m = p * (2 * j + nu)
        lb = _log_bessel_majorant(m, R)
        if lb == -math.inf:
            return lb
        return math.log(2 * j + nu) + lb + _log_gegenbauer_one(2 * j, nu)

    def ratio(j):
        m = p * (2 * j + nu)
        return ((1.0 + 2.0 / (2 * j + nu)) * _gegenbauer_step(2 * j, nu)
                * _gegenbauer_step(2 * j + 1, nu) * _bessel_ratio(m, 2 * p, R))

    plan = _plan(log_bound, ratio, ctrl, "corollary series")
    J = plan.terms
    c = gegenbauer_c_all(2 * J, nu, u)[::2][:J]
    terms = [(2 * j + nu) * bessel_i(p * (2 * j + nu), R) * c[j] for j in range(J)]
    return _report(terms, plan)


def lemma_series_lhs(p: int, sign, R: float, t: float,
                     ctrl: EvalControl = DEFAULT_CONTROL) -> EvalReport:
    """``2 sum_{j >= 0} (+-1)^j I_{pj}(R) cos(j t)``."""
    p = check_positive_int("p", p)
    sg = check_sign(sign)
    _check_R(R)
    if not 0.0 <= t <= math.pi:
        raise DomainError(f"t must lie in [0, pi], got {t!r}")

    def log_bound(j):
        lb = _log_bessel_majorant(p * j, R)
        return lb if lb == -math.inf else math.log(2.0) + lb

    def ratio(j):
        return _bessel_ratio(p * j, p, R)

    plan = _plan(log_bound, ratio, ctrl, "lemma series")
    terms = [2.0 * sg ** j * bessel_i(p * j, R) * math.cos(j * t) for j in range(plan.terms)]
    return _report(terms, plan)


# ------------------------------------------------------- dihedral series

def _jacobi_log_sup(j: int, a: float, b: float) -> float:
    # log max |p_j| over [-1, 1] for the orthonormal polynomial, q = max(a, b) >= -1/2
    q = max(a, b)
    return (math.lgamma(q + 1.0 + j) - math.lgamma(q + 1.0) - math.lgamma(j + 1.0)
            - 0.5 * jacobi_log_norm_sq(j, a, b))


def _jacobi_sq_step(j: int, a: float, b: float) -> float:
    """Nonincreasing bound, for ``j >= 1``, on ``sup|p_{j+1}|^2 / sup|p_j|^2``."""
    q = max(a, b)
    s = max(1.0, 1.0 + q / (j + 1.0)) ** 2
    s *= 1.0 + 2.0 / (2.0 * j + a + b + 1.0)
    s *= 1.0 + max(0.0, -a * b) / ((j + a + 1.0) * (j + b + 1.0))
    return s


def bessel_jacobi_series(p: int, k0: float, k1: float, rho_r: float, x1: float, x2: float,
                         ctrl: EvalControl = DEFAULT_CONTROL) -> EvalReport:
    r"""``c_{p,k} (2/R)^gamma sum_j I_{2jp+gamma}(R) p_j^{l1,l0}(x1) p_j^{l1,l0}(x2)``.

    ``x1, x2`` are the Jacobi arguments ``cos(2 p phi)``, ``cos(2 p theta)``;
    ``k1 = 0`` gives the odd-group series with ``p = n``. The group constant
    is merged with ``1/Gamma(gamma+1)`` so no Gamma value of size ``gamma``
    is ever formed.
    """
    p = check_positive_int("p", p)
    if not (k0 > 0.0 and k1 >= 0.0):
        raise DomainError(f"multiplicities need k0 > 0 and k1 >= 0, got ({k0}, {k1})")
    _check_R(rho_r)
    for x in (x1, x2):
        if not -1.0 <= x <= 1.0:
            raise DomainError(f"Jacobi argument must lie in [-1, 1], got {x!r}")
    R = rho_r
    if R == 0.0:
        # only the j = 0 term survives, and it is the normalization D(0, y) = 1
        return EvalReport(value=1.0, abs_error_est=0.0, method="series", terms_used=1)
    nu = k0 + k1
    gamma = p * nu
    a, b = k1 - 0.5, k0 - 0.5
    log_c0 = (nu * math.log(2.0) + math.lgamma(k1 + 0.5) + math.lgamma(k0 + 0.5)
              - math.lgamma(nu + 1.0))

    def log_bound(j):
        m = gamma + 2 * j * p
        lb = _log_bessel_majorant(m, R)
        if lb == -math.inf:
            return lb
        return log_c0 + math.lgamma(gamma + 1.0) + lb - gamma * math.log(0.5 * R) \
            + 2.0 * _jacobi_log_sup(j, a, b)

    def ratio(j):
        return _jacobi_sq_step(j, a, b) * _bessel_ratio(gamma + 2 * j * p, 2 * p, R)

    plan = _plan(log_bound, ratio, ctrl, "dihedral series")
    J = plan.terms
    h = 0.5 * R
    lead = math.exp(log_c0)
    s = np.empty(J)
    for j in range(J):
        m = gamma + 2 * j * p
        s[j] = lead * bessel_i_normalized(m, R)
        for i in range(1, 2 * p + 1):
            lead *= h / (m + i)
    pj = jacobi_orthonormal_all(J - 1, a, b, np.array([x1, x2]))
    terms = s * pj[:, 0] * pj[:, 1]
    return _report(terms, plan, gamma + 2 * p * np.arange(J), R)


def _gbf(params, x, y, ctrl, strict):
    if strict:
        check_chamber(params, x)
        check_chamber(params, y)
    m = params.angle_factor
    x1 = min(1.0, max(-1.0, math.cos(2 * m * x.angle)))
    x2 = min(1.0, max(-1.0, math.cos(2 * m * y.angle)))
    return bessel_jacobi_series(m, params.k0, params.k1, x.radius * y.radius, x1, x2, ctrl)


def gbf_even_series(params: DihedralParams, x: PolarPoint, y: PolarPoint, ctrl: EvalControl = DEFAULT_CONTROL,
                    strict: bool = True) -> EvalReport:
    """Generalized Bessel function of an even dihedral group from its Bessel-Jacobi series."""
    if params.parity != "even":
        raise DomainError("gbf_even_series needs even-group parameters")
    return _gbf(params, x, y, ctrl, strict)


def gbf_odd_series(params: DihedralParams, x: PolarPoint, y: PolarPoint, ctrl: EvalControl = DEFAULT_CONTROL,
                   strict: bool = True) -> EvalReport:
    """Odd dihedral group: the even series with ``p = n`` and ``k1 = 0``."""
    if params.parity != "odd":
        raise DomainError("gbf_odd_series needs odd-group parameters")
    return _gbf(params, x, y, ctrl, strict)
