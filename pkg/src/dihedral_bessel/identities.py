"""Residuals of the classical identities behind the closed forms.

Each :class:`IdentityCase` names one identity and one parameter point;
:func:`identity_residual` returns ``|LHS - RHS|``. Quadrature-based kinds
are re-evaluated at twice the requested order, and a residual that moves
by more than a tenth of ``max(residual, threshold)`` is reported as an
under-resolved quadrature instead of being returned.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .closedform import shifted_exp_sum
from .core import (DEFAULT_CONTROL, DomainError, EvalControl, QuadratureOrderError,
                   check_positive_int, check_sign)
from .genseries import f_series, lemma_series_lhs
from .quadrature import MAX_ORDER, build_rule, gauss_jacobi_interval, rule_for
from .specfun import (bessel_i, gegenbauer_at_one, gegenbauer_c_all, gegenbauer_w,
                      jacobi_orthonormal, jacobi_p, pochhammer)

KINDS = (
    "gegenbauer_orthogonality", "mehler", "xu", "dijksma_koornwinder", "odd_product_formula",
    "quadratic_transformation", "gegenbauer_classical", "bessel_generating",
    "lemma_cosine_expansion",
)

_QUADRATURE_KINDS = frozenset({
    "gegenbauer_orthogonality", "mehler", "xu", "dijksma_koornwinder", "odd_product_formula",
})


def roots_of_unity_filter(j: int, m: int) -> float:
    """``(1/m) sum_{s=1..m} exp(2 pi i s j / m)``: 1 when ``m`` divides ``j``, else 0."""
    m = check_positive_int("m", m)
    if int(j) != j:
        raise DomainError(f"j must be an integer, got {j!r}")
    total = sum(cmath.exp(2j * math.pi * s * (int(j) % m) / m) for s in range(1, m + 1)) / m
    if abs(total.imag) > 1e-14:
        raise ArithmeticError(f"imaginary part {total.imag!r} did not cancel")
    return total.real


@dataclass(frozen=True)
class IdentityCase:
    kind: str
    params: Mapping[str, float] = field(default_factory=dict)
    quad_order: int = 32
    threshold: float = 1e-8

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown identity kind {self.kind!r}")
        check_positive_int("quad_order", self.quad_order)
        object.__setattr__(self, "params", MappingProxyType(dict(self.params)))

    def to_dict(self) -> dict:
        return {"kind": self.kind, "params": dict(self.params), "quad_order": self.quad_order,
                "threshold": self.threshold}


@dataclass(frozen=True)
class IdentityResult:
    case: IdentityCase
    residual: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.case.threshold

    def to_dict(self) -> dict:
        d = self.case.to_dict()
        d.update(residual=self.residual, passed=self.passed)
        return d


# ------------------------------------------------------------------ kinds

def _orthogonality(P, order, ctrl):
    j, m, nu = int(P["j"]), int(P["m"]), P["nu"]
    rule = build_rule(nu, order)
    c = gegenbauer_c_all(max(j, m), nu, rule.nodes)
    lhs = (j + nu) * math.fsum(rule.weights * c[j] * c[m])
    rhs = nu * gegenbauer_at_one(j, nu) if j == m else 0.0
    return abs(lhs - rhs)


def _mehler(P, order, ctrl):
    j, nu, zeta = int(P["j"]), P["nu"], P["zeta"]
    if not 0.0 < zeta < math.pi:
        raise DomainError("mehler needs 0 < zeta < pi")
    # weight (zeta - t)^(nu-1) carries the endpoint behaviour; the rest is smooth
    t, w = gauss_jacobi_interval(order, nu - 1.0, 0.0, 0.0, zeta)
    ratio = (np.cos(t) - math.cos(zeta)) / (zeta - t)
    integral = math.fsum(w * np.cos((j + nu) * t) * ratio ** (nu - 1.0))
    pref = (2.0 ** nu * math.gamma(nu + 0.5) / (math.gamma(nu) * math.sqrt(math.pi))
            * math.sin(zeta) ** (1.0 - 2.0 * nu))
    return abs(gegenbauer_w(j, nu, math.cos(zeta)) - pref * integral)


def _xu(P, order, ctrl):
    j, nu, zeta = int(P["j"]), P["nu"], P["zeta"]
    rule = build_rule(nu - 0.5, order)
    scale = math.sqrt(0.5 * (1.0 + math.cos(zeta)))
    rhs = math.fsum(rule.weights * gegenbauer_c_all(2 * j, 2.0 * nu, scale * rule.nodes)[-1])
    lhs = float(gegenbauer_c_all(j, nu, math.cos(zeta))[-1])
    return abs(lhs - rhs)


def _dk_constant(a, b):
    return math.exp((a + b + 1.0) * math.log(2.0) + math.lgamma(a + 1.0) + math.lgamma(b + 1.0)
                    - math.lgamma(a + b + 1.0))


def _dijksma_koornwinder(P, order, ctrl):
    # the variable multiplying cos(theta) cos(phi) carries mu^beta, the other mu^alpha
    j, a, b, phi, theta = int(P["j"]), P["alpha"], P["beta"], P["phi"], P["theta"]
    lhs = (_dk_constant(a, b) * jacobi_orthonormal(j, a, b, math.cos(2 * phi))
           * jacobi_orthonormal(j, a, b, math.cos(2 * theta)))
    ru, rv = rule_for(b, order), rule_for(a, order)
    z = (ru.nodes[:, None] * math.cos(theta) * math.cos(phi)
         + rv.nodes[None, :] * math.sin(theta) * math.sin(phi))
    c = gegenbauer_c_all(2 * j, a + b + 1.0, z)[-1]
    rhs = (2 * j + a + b + 1.0) * math.fsum((ru.weights[:, None] * rv.weights[None, :] * c).ravel())
    return abs(lhs - rhs)


def _odd_constant(k):
    return 2.0 ** (k + 1.0) * math.sqrt(math.pi) * math.gamma(k + 0.5) / math.gamma(k)


def _odd_product(P, order, ctrl):
    j, k, n, phi, theta = int(P["j"]), P["k"], int(P["n"]), P["phi"], P["theta"]
    a, b = -0.5, k - 0.5
    lhs = (_odd_constant(k) * jacobi_orthonormal(j, a, b, math.cos(2 * n * theta))
           * jacobi_orthonormal(j, a, b, math.cos(2 * n * phi)))
    rule = build_rule(k - 0.5, order)
    z = rule.nodes * math.cos(n * theta) * math.cos(n * phi) + math.sin(n * theta) * math.sin(n * phi)
    rhs = 2.0 * (2 * j + k) * math.fsum(rule.weights * gegenbauer_c_all(2 * j, k, z)[-1])
    return abs(lhs - rhs)


def _quadratic(P, order, ctrl):
    j, k, s = int(P["j"]), P["k"], P["s"]
    lhs = jacobi_p(j, -0.5, k - 0.5, 1.0 - 2.0 * s * s)
    rhs = ((-1.0) ** j * pochhammer(0.5, j) / pochhammer(k, j)
           * float(gegenbauer_c_all(2 * j, k, s)[-1]))
    return abs(lhs - rhs)


def _gegenbauer_classical(P, order, ctrl):
    g, R, zeta = P["gamma"], P["R"], P["zeta"]
    sg = check_sign(P["sign"])
    lhs = f_series(g, 1, sg, R, min(1.0, max(-1.0, math.cos(zeta))), ctrl).value
    return abs(lhs - math.exp(sg * R * math.cos(zeta)) / math.gamma(g))


def _bessel_generating(P, order, ctrl):
    R, t = P["R"], P["t"]
    # I_J(R) <= (R/2)^J e^{R^2/4} / J!, and the tail is dominated geometrically
    J = 1
    while True:
        lb = J * math.log(max(0.5 * R, 1e-300)) + 0.25 * R * R - math.lgamma(J + 1.0)
        q = 0.5 * R / (J + 1.0)
        if q < 1.0 and 2.0 * math.exp(lb) / (1.0 - q) < 1e-15:
            break
        J += 1
    z = cmath.exp(1j * t)
    rhs = math.fsum(bessel_i(abs(j), R) * (z ** j).real for j in range(-J, J + 1))
    imag = math.fsum(bessel_i(abs(j), R) * (z ** j).imag for j in range(-J, J + 1))
    lhs = cmath.exp(0.5 * (z + 1.0 / z) * R)
    return abs(complex(lhs.real - rhs, lhs.imag - imag))


def _lemma(P, order, ctrl):
    p, R, t = int(P["p"]), P["R"], P["t"]
    sg = check_sign(P["sign"])
    lhs = lemma_series_lhs(p, sg, R, t, ctrl).value
    return abs(lhs - (bessel_i(0, R) + shifted_exp_sum(p, sg, R, t)))


_DISPATCH = {
    "gegenbauer_orthogonality": _orthogonality,
    "mehler": _mehler,
    "xu": _xu,
    "dijksma_koornwinder": _dijksma_koornwinder,
    "odd_product_formula": _odd_product,
    "quadratic_transformation": _quadratic,
    "gegenbauer_classical": _gegenbauer_classical,
    "bessel_generating": _bessel_generating,
    "lemma_cosine_expansion": _lemma,
}


def identity_residual(case: IdentityCase, ctrl: EvalControl = DEFAULT_CONTROL,
                      check_order: bool = True) -> float:
    """``|LHS - RHS|`` for ``case``."""
    fn = _DISPATCH[case.kind]
    r = fn(case.params, case.quad_order, ctrl)
    if check_order and case.kind in _QUADRATURE_KINDS:
        r2 = fn(case.params, min(2 * case.quad_order, MAX_ORDER), ctrl)
        if abs(r2 - r) > 0.1 * max(r, case.threshold):
            raise QuadratureOrderError(
                f"{case.kind}: doubling quad_order {case.quad_order} moved the residual "
                f"from {r:.3e} to {r2:.3e}")
    if not math.isfinite(r):
        raise ArithmeticError(f"{case.kind}: non-finite residual")
    return r


def evaluate_case(case: IdentityCase, ctrl: EvalControl = DEFAULT_CONTROL) -> IdentityResult:
    return IdentityResult(case, identity_residual(case, ctrl))
