"""Evaluators for the dual-path comparisons listed in :mod:`manifest`."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .closedform import (corollary_rhs, cubic_root_z, cubic_root_z_trig, p2_closed, p3_closed,
                         proposition_series)
from .core import DomainError, EvalControl, PolarPoint, check_sign
from .dihedral import dkw
from .genseries import corollary_lhs, f_series
from .manifest import CrossCheck

ORACLE_CONTROL = EvalControl(max_terms=400, tail_tol=1e-15)


@dataclass(frozen=True)
class CheckResult:
    check: CrossCheck
    residual: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.check.threshold

    def to_dict(self) -> dict:
        d = self.check.to_dict()
        d.update(residual=self.residual, passed=self.passed)
        return d


class CrossChecker:
    """Evaluates checks, reusing one Chebyshev fit per ``(nu, p, sign, R)`` within a run."""

    def __init__(self, ctrl: EvalControl = ORACLE_CONTROL):
        self.ctrl = ctrl
        self._fits = {}

    def _proposition(self, nu, p, sign, R):
        key = (nu, p, sign, R)
        if key not in self._fits:
            self._fits[key] = proposition_series(nu, p, sign, R)
        return self._fits[key]

    def residual(self, check: CrossCheck) -> float:
        P = check.params
        kind = check.kind
        if kind == "proposition":
            nu, p, R, u = P["nu"], P["p"], P["R"], P["u"]
            sg = check_sign(P["sign"])
            lhs = (0.5 * R) ** (p * nu) * f_series(nu, p, sg, R, u, self.ctrl).value
            return abs(lhs - float(self._proposition(nu, p, sg, R)(u)))
        if kind == "p2_vs_series":
            nu, R, zeta = P["nu"], P["R"], P["zeta"]
            series = (2.0 / R) ** (2 * nu) * corollary_lhs(nu, 2, R, math.cos(zeta), self.ctrl).value
            return abs(p2_closed(nu, R, zeta) - series)
        if kind == "p2_vs_corollary":
            nu, R, zeta = P["nu"], P["R"], P["zeta"]
            general = (2.0 / R) ** (2 * nu) * corollary_rhs(nu, 2, R, math.cos(zeta))
            return abs(p2_closed(nu, R, zeta) - general)
        if kind == "cubic_equation":
            z = cubic_root_z(P["u"])
            return abs(4.0 * z ** 3 - 3.0 * z - P["u"])
        if kind == "cubic_trig":
            return abs(cubic_root_z(P["u"]) - cubic_root_z_trig(P["u"]))
        if kind == "cubic_zero":
            return abs(cubic_root_z(0.0) - math.sqrt(3.0) / 2.0)
        if kind == "p3_vs_series":
            nu, R, u = P["nu"], P["R"], P["u"]
            sg = check_sign(P["sign"])
            return abs(p3_closed(nu, sg, R, u) - f_series(nu, 3, sg, R, u, self.ctrl).value)
        if kind == "p3_analytic_vs_spectral":
            R, u = P["R"], P["u"]
            sg = check_sign(P["sign"])
            return abs(p3_closed(1, sg, R, u, method="analytic")
                       - p3_closed(1, sg, R, u, method="spectral"))
        if kind == "normalization":
            x0 = PolarPoint(0.0, 0.0)
            return abs(dkw(P["params"], x0, P["y"], P["method"], self.ctrl).value - 1.0)
        if kind == "dkw_agreement":
            s = dkw(P["params"], P["x"], P["y"], "series", self.ctrl).value
            i = dkw(P["params"], P["x"], P["y"], "integral", self.ctrl).value
            return abs(s - i)
        if kind == "dkw_symmetry":
            a = dkw(P["params"], P["x"], P["y"], "series", self.ctrl).value
            b = dkw(P["params"], P["y"], P["x"], "series", self.ctrl).value
            return abs(a - b)
        raise DomainError(f"unknown cross-check kind {kind!r}")

    def evaluate(self, check: CrossCheck) -> CheckResult:
        return CheckResult(check, self.residual(check))
