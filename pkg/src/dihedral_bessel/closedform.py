r"""Closed forms for the Bessel-Gegenbauer generating series.

For integer ``nu >= 1`` the scaled series
``(R/2)^{p nu} f^{+-}_{nu,p}(R, cos zeta)`` equals
``(+-1)^nu / (2^nu Gamma(nu))`` times the ``nu``-fold operator
``[-(1/sin zeta) d/dzeta]`` applied to a shifted exponential average

.. math::

    H^+_p(\zeta) = \frac{1}{p} \sum_{s=1}^{p} e^{R \cos((\zeta + 2\pi s)/p)},
    \qquad H^-_p(\zeta) = H^+_p(\zeta + \pi).

``H`` is even and ``2 pi``-periodic in ``zeta``, so it is a function of
``u = cos zeta``, and the operator is simply ``(d/du)^nu`` in that variable.
We carry ``H`` as a Chebyshev series in ``u`` and differentiate the
coefficients exactly, which never touches the ``1/sin zeta`` singularity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import chebyshev as cheb

from .core import DomainError, FitNotResolvedError, check_positive_int, check_sign
from .specfun import bessel_i_normalized, hyp2f1

RESOLVE_TOL = 1e-13
TRIM_TOL = 1e-18

# Sampling and the cosine transform run in x87 extended precision where the
# platform has it; differentiation amplifies absolute coefficient noise by
# roughly degree^(2 nu), which plain float64 sampling cannot absorb.
_WORK = np.longdouble
_EXTENDED = np.finfo(_WORK).eps < 1e-18
_PI = np.arccos(_WORK(-1))


def default_degree(R: float) -> int:
    """Chebyshev degree sufficient for ``H`` at radius ``R``."""
    if R <= 10.0:
        return 96
    if R <= 30.0:
        return 192
    return 256


@lru_cache(maxsize=16)
def _chebyshev_angles(degree: int):
    n = degree + 1
    theta = _PI * (np.arange(n, dtype=_WORK) + _WORK(0.5)) / n
    theta.setflags(write=False)
    return theta


@lru_cache(maxsize=16)
def _transform_matrix(degree: int):
    # cos(k theta_i) with k theta_i = pi k (2i+1) / (2n), reduced exactly mod 2 pi
    n = degree + 1
    idx = np.arange(n)
    r = np.outer(idx, 2 * idx + 1) % (4 * n)
    m = (2.0 / n) * np.cos(_PI * r.astype(_WORK) / (2 * n))
    m[0] *= 0.5
    m.setflags(write=False)
    return m


def _cosine_transform(values, theta):
    return _transform_matrix(len(theta) - 1) @ values


@dataclass(frozen=True)
class ChebSeries:
    """Chebyshev-T expansion on ``[-1, 1]``.

    ``fit_degree`` is the interpolation degree before trimming; ``tail``
    estimates the absolute fit error carried by the coefficients.
    """

    coeffs: np.ndarray
    fit_degree: int = 0
    tail: float = 0.0

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def fit(cls, f, degree: int, check: bool = True) -> "ChebSeries":
        """Interpolate ``f(u)`` at ``degree + 1`` Chebyshev points of the first kind."""
        if degree < 1:
            raise DomainError(f"degree must be positive, got {degree}")
        theta = _chebyshev_angles(degree)
        vals = np.asarray(f(np.cos(theta).astype(float)), dtype=_WORK)
        return cls._from_values(vals, theta, degree, check)

    @classmethod
    def fit_angular(cls, g, degree: int, check: bool = True) -> "ChebSeries":
        """Fit ``u -> g(arccos u)`` for an even, ``2 pi``-periodic ``g``.

        ``g`` receives the exact sampling angles in working precision, which
        avoids the ``arccos`` round trip.
        """
        if degree < 1:
            raise DomainError(f"degree must be positive, got {degree}")
        theta = _chebyshev_angles(degree)
        return cls._from_values(np.asarray(g(theta), dtype=_WORK), theta, degree, check)

    @classmethod
    def _from_values(cls, vals, theta, degree, check):
        if not np.all(np.isfinite(vals)):
            raise FitNotResolvedError("non-finite samples in Chebyshev fit")
        c = _cosine_transform(vals, theta)
        a = np.abs(c).astype(float)
        scale = float(a.max()) or 1.0
        tail = float(a[-3:].max())
        if check and tail > RESOLVE_TOL * scale:
            raise FitNotResolvedError(
                f"Chebyshev fit of degree {degree} not resolved: trailing coefficient "
                f"{tail:.3e} vs scale {scale:.3e}; raise the degree")
        # coefficients in the last third of a resolved fit are sampling noise;
        # anything at that level would only be amplified by differentiation
        plateau = float(a[-max(3, len(a) // 3):].max())
        keep = np.nonzero(a > max(TRIM_TOL * scale, 4.0 * plateau))[0]
        last = int(keep[-1]) if keep.size else 0
        dropped = float(a[last + 1:].max()) if last + 1 < len(a) else 0.0
        noise = float(np.finfo(_WORK).eps) * scale * math.sqrt(degree + 1)
        coeffs = c[:last + 1].astype(float)
        coeffs.setflags(write=False)
        return cls(coeffs, fit_degree=degree, tail=max(dropped, noise))

    def derivative(self, order: int = 1) -> "ChebSeries":
        if order == 0:
            return self
        if self.degree < order:
            d = np.zeros(1)
        else:
            d = cheb.chebder(self.coeffs, order)
        d.setflags(write=False)
        # max over [-1, 1] of the order-th derivative of T_n, attained at u = 1
        n = max(self.degree, 1)
        amp = math.prod((n * n - i * i) / (2 * i + 1) for i in range(order)) * (n + 1)
        return ChebSeries(d, fit_degree=self.fit_degree, tail=self.tail * amp)

    def __call__(self, u):
        return cheb.chebval(u, self.coeffs)

    def scaled(self, factor: float) -> "ChebSeries":
        c = self.coeffs * factor
        c.setflags(write=False)
        return ChebSeries(c, fit_degree=self.fit_degree, tail=self.tail * abs(factor))


def _check_u(u):
    arr = np.asarray(u, dtype=float)
    if np.any(np.abs(arr) > 1.0):
        raise DomainError("u = cos(zeta) must lie in [-1, 1]")


def _phase(sign: int):
    # the minus branch is the plus branch at zeta + pi; for odd p this is the
    # same as flipping the sign of R
    return 0.0 if sign > 0 else 1.0


def _shifted_cos(p: int, sign: int, zeta, dtype):
    """``cos((zeta + phase + 2 pi s)/p)`` for ``s = 1..p``, stacked on a new leading axis.

    The shift is reduced modulo ``2 pi`` in integer arithmetic and applied by
    angle addition, so no large angle is ever formed.
    """
    z = np.asarray(zeta, dtype=dtype) / p
    pi = _PI if dtype is _WORK else math.pi
    k = (int(_phase(sign)) + 2 * np.arange(1, p + 1)) % (2 * p)
    a = (pi * k.astype(dtype) / p).reshape((-1,) + (1,) * z.ndim)
    return np.cos(z) * np.cos(a) - np.sin(z) * np.sin(a)


def _shifted_sum(p: int, sign: int, R: float, zeta, xp=np):
    dtype = _WORK if xp is _WORK else float
    return np.exp(dtype(R) * _shifted_cos(p, sign, zeta, dtype)).sum(axis=0) / p


def _exp_remainder(x, M: int):
    """``exp(x) - sum_{m<M} x^m/m!`` summed from ``m = M`` upward, in working precision."""
    x = np.asarray(x, dtype=_WORK)
    if M == 0:
        return np.exp(x)
    term = x ** M
    for m in range(2, M + 1):
        term = term / m
    total = term.copy()
    eps = np.finfo(_WORK).eps
    for m in range(M, M + 4000):
        term = term * x / (m + 1)
        total += term
        if m + 1 > np.max(np.abs(x)) and np.all(np.abs(term) <= eps * np.abs(total)):
            return total
    raise FitNotResolvedError("exponential remainder series did not settle")


def _reduced_sum(p: int, sign: int, R: float, zeta, nu: int):
    """``H^{+-}_p`` minus a polynomial of degree ``< nu`` in ``cos zeta``.

    Taylor terms of order ``m < p nu`` average over the ``p`` shifts to
    polynomials of degree ``<= m/p < nu`` in ``cos zeta``, which the ``nu``-th
    derivative annihilates; dropping them leaves samples of size about
    ``(R/2)^{p nu}/(p nu)!`` and keeps their relative accuracy at small ``R``.
    """
    return _exp_remainder(_WORK(R) * _shifted_cos(p, sign, zeta, _WORK), p * nu).sum(axis=0) / p


def shifted_exp_sum(p: int, sign, R: float, zeta):
    """Shifted exponential average ``H^{+-}_p`` at angle ``zeta``; vectorized.

    ``H^+ = (1/p) sum_{s=1..p} exp(R cos((zeta + 2 pi s)/p))`` and
    ``H^- = (1/p) sum_{s=1..p} exp(R cos((zeta + pi + 2 pi s)/p))``.
    For odd ``p`` the latter equals ``(1/p) sum_s exp(-R cos((zeta + 2 pi s)/p))``;
    for even ``p`` it does not, and only the phase-shifted form matches
    ``2 sum_j (-1)^j I_{pj}(R) cos(j zeta) - I_0(R)``.
    """
    p = check_positive_int("p", p)
    vals = _shifted_sum(p, check_sign(sign), R, zeta)
    return float(vals) if np.ndim(vals) == 0 else vals


def shifted_cosh_sum(p: int, R: float, zeta):
    """``(1/p) sum_{s=1..p} cosh(R cos((zeta + 2 pi s)/p))``, i.e. ``(H^+ + H^-)/2`` for odd ``p``."""
    p = check_positive_int("p", p)
    z = np.asarray(zeta, dtype=float)
    s = np.arange(1, p + 1).reshape((-1,) + (1,) * z.ndim)
    vals = np.cosh(R * np.cos((z + 2.0 * math.pi * s) / p)).sum(axis=0) / p
    return float(vals) if np.ndim(vals) == 0 else vals


def nth_derivative_on_interval(f, order: int, u: float, degree: int) -> float:
    """``(d/du)^order f`` at ``u``, by Chebyshev fit and exact coefficient differentiation."""
    if int(order) != order or order < 0:
        raise DomainError(f"order must be a non-negative integer, got {order!r}")
    _check_u(u)
    return float(ChebSeries.fit(f, degree).derivative(int(order))(u))


def _nu_int(nu) -> int:
    try:
        return check_positive_int("nu", nu)
    except (TypeError, ValueError):
        raise DomainError(f"the closed form needs an integer nu >= 1, got {nu!r}") from None


def proposition_series(nu: int, p: int, sign, R: float, degree: int | None = None) -> ChebSeries:
    r"""Chebyshev series in ``u`` of ``(R/2)^{p nu} f^{+-}_{nu,p}(R, u)``.

    ``(+-1)^nu / (2^nu Gamma(nu))`` times the ``nu``-th ``u``-derivative of
    ``H^{+-}_p``. Fit once, evaluate anywhere on ``[-1, 1]``.
    """
    nu = _nu_int(nu)
    p = check_positive_int("p", p)
    sg = check_sign(sign)
    if R < 0:
        raise DomainError(f"R must be >= 0, got {R!r}")
    deg = degree or default_degree(R)
    h = ChebSeries.fit_angular(lambda z: _reduced_sum(p, sg, R, z, nu), deg)
    return h.derivative(nu).scaled(sg ** nu / (2.0 ** nu * math.gamma(nu)))


def corollary_series(nu: int, p: int, R: float, degree: int | None = None) -> ChebSeries:
    """Chebyshev series in ``u`` of ``sum_j (2j+nu) I_{p(2j+nu)}(R) C_{2j}^nu(u)``.

    The even-index part of the generating series, i.e. the average of the
    plus and minus branches: one fit of ``(H^+ + (-1)^nu H^-)/2``.
    """
    nu = _nu_int(nu)
    p = check_positive_int("p", p)
    if R < 0:
        raise DomainError(f"R must be >= 0, got {R!r}")
    deg = degree or default_degree(R)
    sgn = (-1.0) ** nu

    def g(z):
        return 0.5 * (_reduced_sum(p, 1, R, z, nu) + sgn * _reduced_sum(p, -1, R, z, nu))

    h = ChebSeries.fit_angular(g, deg)
    return h.derivative(nu).scaled(1.0 / (2.0 ** nu * math.gamma(nu)))


def series_limit_at_zero(nu: float, p: int) -> float:
    """``lim_{R->0} f^{+-}_{nu,p}(R, u) = nu / Gamma(p nu + 1)``."""
    return nu / math.gamma(p * nu + 1.0)


def proposition_rhs(nu: int, p: int, sign, R: float, u: float, degree: int | None = None,
                    scaled: bool = False) -> float:
    """Right-hand side of the main identity at ``u = cos zeta``.

    Unscaled, this is ``(R/2)^{p nu} f^{+-}_{nu,p}(R, u)``. With
    ``scaled=True`` the ``(R/2)^{p nu}`` factor is divided out so the result
    compares directly with ``f_series``; at ``R = 0`` the analytic limit is
    returned.
    """
    _check_u(u)
    nu = _nu_int(nu)
    if scaled and R == 0.0:
        return series_limit_at_zero(nu, p)
    val = float(proposition_series(nu, p, sign, R, degree)(u))
    if scaled:
        val /= (0.5 * R) ** (p * nu)
    return val


def corollary_rhs(nu: int, p: int, R: float, u: float, degree: int | None = None) -> float:
    """Closed form of the even-index series ``sum_j (2j+nu) I_{p(2j+nu)}(R) C_{2j}^nu(u)``."""
    _check_u(u)
    return float(corollary_series(nu, p, R, degree)(u))


def p2_closed(nu: int, R: float, zeta: float) -> float:
    """``(4/R^2)^nu sum_j (2j+nu) I_{2(2j+nu)}(R) C_{2j}^nu(cos zeta)`` for ``p = 2``.

    Equals ``[i_{nu-1/2}(R cos(zeta/2)) + i_{nu-1/2}(R sin(zeta/2))] / (4 Gamma(2 nu))``
    with ``i_a(x) = Gamma(a+1) (2/x)^a I_a(x)``.
    """
    nu = _nu_int(nu)
    if not 0.0 <= zeta <= math.pi:
        raise DomainError(f"zeta must lie in [0, pi], got {zeta!r}")
    a = nu - 0.5
    return ((bessel_i_normalized(a, R * math.cos(0.5 * zeta))
             + bessel_i_normalized(a, R * math.sin(0.5 * zeta))) / (4.0 * math.gamma(2.0 * nu)))


def cubic_root_z(u: float) -> float:
    r"""Root in ``[1/2, 1]`` of ``4 Z^3 - 3 Z = u``, i.e. ``cos(arccos(u)/3)``.

    Hypergeometric form

    .. math::

        Z(u) = \frac{\sqrt 3}{2}\,{}_2F_1(-\tfrac16, \tfrac16; \tfrac12; u^2)
             + \frac{u}{6}\,{}_2F_1(\tfrac13, \tfrac23; \tfrac32; u^2).
    """
    if not -1.0 <= u <= 1.0:
        raise DomainError(f"u must lie in [-1, 1], got {u!r}")
    x = u * u
    return (0.5 * math.sqrt(3.0) * hyp2f1(-1.0 / 6.0, 1.0 / 6.0, 0.5, x)
            + u / 6.0 * hyp2f1(1.0 / 3.0, 2.0 / 3.0, 1.5, x))


def cubic_root_z_derivative(u: float) -> float:
    """``dZ/du`` through the 2F1 differentiation formula; needs ``|u| < 1``."""
    if not -1.0 < u < 1.0:
        raise DomainError(f"dZ/du needs |u| < 1, got {u!r}")
    x = u * u
    d_first = 0.5 * math.sqrt(3.0) * (-1.0 / 18.0) * hyp2f1(5.0 / 6.0, 7.0 / 6.0, 1.5, x) * 2.0 * u
    d_second = (hyp2f1(1.0 / 3.0, 2.0 / 3.0, 1.5, x)
                + u * (4.0 / 27.0) * hyp2f1(4.0 / 3.0, 5.0 / 3.0, 2.5, x) * 2.0 * u) / 6.0
    return d_first + d_second


def cubic_root_z_trig(u: float) -> float:
    """Debug oracle ``cos(arccos(u)/3)``; not used by the main paths."""
    return math.cos(math.acos(u) / 3.0)


def _p3_shifted_sum(sign: int, R: float, u):
    # (1/3) sum_s exp(+-R cos((zeta + 2 pi s)/3)) written through Z(u)
    u = np.atleast_1d(np.asarray(u, dtype=float))
    z = np.array([cubic_root_z(float(t)) for t in u])
    sz = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    out = np.zeros_like(z)
    for s in (1, 2, 3):
        a = 2.0 * math.pi * s / 3.0
        out += np.exp(sign * R * (math.cos(a) * z - math.sin(a) * sz))
    return out / 3.0


def p3_closed(nu: int, sign, R: float, u: float, degree: int | None = None,
              method: str = "spectral") -> float:
    """``f^{+-}_{nu,3}(R, u)`` through the cubic-root parametrization.

    ``method="spectral"`` differentiates the ``Z(u)``-composed shifted sum
    ``nu`` times via Chebyshev; ``method="analytic"`` (``nu = 1`` only)
    applies the chain rule through ``dZ/du``.
    """
    nu = _nu_int(nu)
    sg = check_sign(sign)
    if not -1.0 <= u <= 1.0:
        raise DomainError(f"u must lie in [-1, 1], got {u!r}")
    if R == 0.0:
        return series_limit_at_zero(nu, 3)
    pref = sg ** nu * (2.0 / R) ** (3 * nu) / (2.0 ** nu * math.gamma(nu))
    if method == "spectral":
        deg = degree or default_degree(R)
        series = ChebSeries.fit(lambda t: _p3_shifted_sum(sg, R, t), deg)
        return pref * float(series.derivative(nu)(u))
    if method == "analytic":
        if nu != 1:
            raise DomainError("the analytic p=3 path is only available for nu = 1")
        z = cubic_root_z(u)
        dz = cubic_root_z_derivative(u)
        sz = math.sqrt(max(0.0, 1.0 - z * z))
        total = 0.0
        for s in (1, 2, 3):
            a = 2.0 * math.pi * s / 3.0
            c = math.cos(a) * z - math.sin(a) * sz
            dc = dz * (math.cos(a) + math.sin(a) * z / sz)
            total += math.exp(sg * R * c) * sg * R * dc
        return pref * total / 3.0
    raise DomainError(f"unknown method {method!r}")
