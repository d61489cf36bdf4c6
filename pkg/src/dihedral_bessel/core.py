"""Shared value types and exceptions."""
from __future__ import annotations

import math
from dataclasses import dataclass, asdict


class DihedralBesselError(Exception):
    """Base class for every error raised by this package."""


class DomainError(DihedralBesselError, ValueError):
    """An argument lies outside the supported domain."""


class ChamberError(DomainError):
    """An angle lies outside the fundamental chamber of the group."""


class ConvergenceError(DihedralBesselError, ArithmeticError):
    """A series or iteration hit its cap before reaching the requested accuracy."""


class FitNotResolvedError(DihedralBesselError, ArithmeticError):
    """A Chebyshev fit still has significant trailing coefficients."""


class QuadratureOrderError(DihedralBesselError, ArithmeticError):
    """Doubling the quadrature order moved the result by more than allowed."""


class NonFiniteError(DihedralBesselError, ArithmeticError):
    """An integrand or series term produced inf or nan."""


@dataclass(frozen=True)
class EvalControl:
    """Truncation policy for infinite series.

    ``tail_tol`` is an absolute bound on the neglected tail.
    """

    max_terms: int = 400
    tail_tol: float = 1e-15

    def __post_init__(self):
        if int(self.max_terms) != self.max_terms or self.max_terms < 1:
            raise DomainError(f"max_terms must be a positive integer, got {self.max_terms!r}")
        if not (self.tail_tol > 0 and math.isfinite(self.tail_tol)):
            raise DomainError(f"tail_tol must be a positive finite number, got {self.tail_tol!r}")


DEFAULT_CONTROL = EvalControl()


@dataclass(frozen=True)
class EvalReport:
    value: float
    abs_error_est: float
    method: str = "series"
    terms_used: int = 0
    quad_order: int = 0

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise NonFiniteError(f"non-finite value {self.value!r} from {self.method}")
        if not (math.isfinite(self.abs_error_est) and self.abs_error_est >= 0):
            raise NonFiniteError(f"invalid error estimate {self.abs_error_est!r}")

    def to_dict(self) -> dict:
        return asdict(self)


def check_sign(sign) -> int:
    """Normalize a sign given as +1/-1 or '+'/'-'."""
    if sign in (1, "+", "plus"):
        return 1
    if sign in (-1, "-", "minus"):
        return -1
    raise DomainError(f"sign must be '+' or '-', got {sign!r}")


def check_positive_int(name: str, value, minimum: int = 1) -> int:
    if isinstance(value, bool) or int(value) != value or value < minimum:
        raise DomainError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


_CHAMBER_SLACK = 1e-12


@dataclass(frozen=True)
class DihedralParams:
    """Group and multiplicities.

    ``parity="even"`` with ``order=p`` is the dihedral group of order ``4p``
    with multiplicities ``(k0, k1)``; ``parity="odd"`` with odd ``order=n >= 3``
    has a single multiplicity ``k = k0`` and ``k1`` is unused (stored as 0).
    """

    parity: str
    order: int
    k0: float
    k1: float = 0.0

    def __post_init__(self):
        if self.parity not in ("even", "odd"):
            raise DomainError(f"parity must be 'even' or 'odd', got {self.parity!r}")
        check_positive_int("p" if self.parity == "even" else "n", self.order)
        if self.parity == "odd":
            if self.order < 3 or self.order % 2 == 0:
                raise DomainError(f"odd groups need an odd n >= 3, got {self.order}")
            if self.k1 != 0.0:
                raise DomainError("odd groups carry a single multiplicity; k1 must be 0")
        if not (math.isfinite(self.k0) and self.k0 > 0.0):
            raise DomainError(f"k0 must be positive, got {self.k0!r}")
        if not (math.isfinite(self.k1) and self.k1 >= 0.0):
            raise DomainError(f"k1 must be non-negative, got {self.k1!r}")

    @classmethod
    def even(cls, p: int, k0: float, k1: float) -> "DihedralParams":
        return cls("even", p, float(k0), float(k1))

    @classmethod
    def odd(cls, n: int, k: float) -> "DihedralParams":
        return cls("odd", n, float(k), 0.0)

    @property
    def nu(self) -> float:
        return self.k0 + self.k1

    @property
    def gamma(self) -> float:
        return self.order * self.nu

    @property
    def l0(self) -> float:
        return self.k0 - 0.5

    @property
    def l1(self) -> float:
        return self.k1 - 0.5

    @property
    def chamber_width(self) -> float:
        return math.pi / (2 * self.order) if self.parity == "even" else math.pi / self.order

    @property
    def angle_factor(self) -> int:
        """Multiplier ``m`` such that Jacobi arguments are ``cos(2 m angle)``."""
        return self.order

    @property
    def integer_nu(self) -> bool:
        return abs(self.nu - round(self.nu)) <= 1e-12 and round(self.nu) >= 1


@dataclass(frozen=True)
class PolarPoint:
    radius: float
    angle: float

    def __post_init__(self):
        if not (math.isfinite(self.radius) and self.radius >= 0.0):
            raise DomainError(f"radius must be finite and >= 0, got {self.radius!r}")
        if not math.isfinite(self.angle):
            raise DomainError(f"angle must be finite, got {self.angle!r}")


def check_chamber(params: DihedralParams, point: PolarPoint) -> None:
    """Raise :class:`ChamberError` unless ``point.angle`` lies in the closed chamber."""
    w = params.chamber_width
    if not -_CHAMBER_SLACK <= point.angle <= w + _CHAMBER_SLACK:
        raise ChamberError(
            f"angle {point.angle!r} outside the chamber [0, {w!r}] of the "
            f"{params.parity} group of order parameter {params.order}; angles are not folded")
