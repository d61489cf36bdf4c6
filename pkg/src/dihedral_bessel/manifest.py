"""Parameter grids shared by ``validate`` and the test suite."""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

from .core import DihedralParams, PolarPoint
from .identities import IdentityCase

DEFAULT_SEED = 20240607
SIGNS = ("+", "-")

# identity grids
ORTHO_NU = (1.0, 2.0, 2.5)
ORTHO_MAX_DEGREE = 10
MEHLER_NU = (1.0, 2.0, 3.0)
MEHLER_J = tuple(range(9))
MEHLER_ZETA = (0.3, 1.1, 2.0, 2.8)
XU_NU = (1.0, 2.0, 3.0)
XU_J = tuple(range(9))
XU_ZETA = (0.0, 0.3, 1.1, 2.0, 2.8, math.pi)
DK_ALPHA_BETA = ((0.5, 1.5), (1.5, 0.5), (0.0, 0.5), (1.0, 1.0), (2.0, 0.5), (-0.5, 1.0))
DK_ANGLES = ((0.3, 0.8), (0.1, 1.2), (0.7, 0.7))
DK_MAX_J = 6
ODD_K = (0.5, 1.0, 1.5, 2.0)
ODD_N = (3, 5)
ODD_ANGLE_FRACTIONS = ((0.2, 0.9), (0.5, 0.1))
QUAD_K = (0.5, 1.0, 2.0)
QUAD_S = (-1.0, -0.6, 0.0, 0.3, 0.8, 1.0)
QUAD_MAX_J = 8
CLASSICAL_GAMMA = (1.0, 2.0, 3.0)
CLASSICAL_R = (0.5, 1.0, 2.0, 5.0, 10.0)
CLASSICAL_ZETA = (0.0, math.pi / 6, math.pi / 3, math.pi / 2, 2 * math.pi / 3, math.pi)
GENERATING_R = (0.5, 2.0, 8.0)
GENERATING_T = (0.0, math.pi / 5, math.pi / 2)
LEMMA_P = (1, 2, 3, 5)
LEMMA_R = (0.5, 2.0, 8.0)
LEMMA_T = (0.0, 0.4, 1.3, math.pi)

# cross-check grids
PROP_NU = (1, 2, 3)
PROP_P = (2, 3, 4, 5)
PROP_R = (0.5, 2.0, 6.0)
PROP_U = (-0.9, -0.3, 0.0, 0.5, 0.95)
P2_NU = (1, 2, 3)
P2_R = (1.0, 3.0, 8.0)
P2_ZETA = (0.2, math.pi / 2, 2.8)
CUBIC_POINTS = 101
DKW_PARAMS = (
    DihedralParams.even(2, 0.5, 0.5),
    DihedralParams.even(2, 1.0, 1.0),
    DihedralParams.even(3, 1.0, 1.0),
    DihedralParams.odd(3, 1.0),
    DihedralParams.odd(3, 2.0),
)
DKW_PAIRS = 5
DKW_RADIUS = (0.5, 2.5)

TOL_CLASSICAL = 1e-10
TOL_LEMMA = 1e-10
TOL_PROPOSITION = 1e-8
TOL_P2 = 1e-9
TOL_CUBIC = 1e-10
TOL_CUBIC_ZERO = 1e-12
TOL_PRODUCT = 1e-8
TOL_QUADRATIC = 1e-10
TOL_NORMALIZATION = 1e-10
TOL_SYMMETRY = 1e-12
TOL_DKW_AGREEMENT = 1e-7
TOL_MEHLER_XU_ORTHO = 1e-8
TOL_GENERATING = 1e-10


def identity_cases() -> list[IdentityCase]:
    out = []
    for nu in ORTHO_NU:
        for j, m in itertools.product(range(ORTHO_MAX_DEGREE + 1), repeat=2):
            out.append(IdentityCase("gegenbauer_orthogonality", {"j": j, "m": m, "nu": nu},
                                    quad_order=max(16, j + m + 4), threshold=TOL_MEHLER_XU_ORTHO))
    for nu, j, zeta in itertools.product(MEHLER_NU, MEHLER_J, MEHLER_ZETA):
        out.append(IdentityCase("mehler", {"j": j, "nu": nu, "zeta": zeta}, quad_order=64,
                                threshold=TOL_MEHLER_XU_ORTHO))
    for nu, j, zeta in itertools.product(XU_NU, XU_J, XU_ZETA):
        out.append(IdentityCase("xu", {"j": j, "nu": nu, "zeta": zeta}, quad_order=32,
                                threshold=TOL_MEHLER_XU_ORTHO))
    for (a, b), (phi, theta), j in itertools.product(DK_ALPHA_BETA, DK_ANGLES,
                                                      range(DK_MAX_J + 1)):
        out.append(IdentityCase("dijksma_koornwinder",
                                {"j": j, "alpha": a, "beta": b, "phi": phi, "theta": theta},
                                quad_order=32, threshold=TOL_PRODUCT))
    for k, n, (fp, ft), j in itertools.product(ODD_K, ODD_N, ODD_ANGLE_FRACTIONS,
                                                range(DK_MAX_J + 1)):
        w = math.pi / n
        out.append(IdentityCase("odd_product_formula",
                                {"j": j, "k": k, "n": n, "phi": fp * w, "theta": ft * w},
                                quad_order=32, threshold=TOL_PRODUCT))
    for k, s, j in itertools.product(QUAD_K, QUAD_S, range(QUAD_MAX_J + 1)):
        out.append(IdentityCase("quadratic_transformation", {"j": j, "k": k, "s": s},
                                quad_order=1, threshold=TOL_QUADRATIC))
    for g, R, zeta, sign in itertools.product(CLASSICAL_GAMMA, CLASSICAL_R, CLASSICAL_ZETA, SIGNS):
        out.append(IdentityCase("gegenbauer_classical",
                                {"gamma": g, "R": R, "zeta": zeta, "sign": sign},
                                quad_order=1, threshold=TOL_CLASSICAL))
    for R, t in itertools.product(GENERATING_R, GENERATING_T):
        out.append(IdentityCase("bessel_generating", {"R": R, "t": t}, quad_order=1,
                                threshold=TOL_GENERATING))
    for p, R, t, sign in itertools.product(LEMMA_P, LEMMA_R, LEMMA_T, SIGNS):
        out.append(IdentityCase("lemma_cosine_expansion", {"p": p, "R": R, "t": t, "sign": sign},
                                quad_order=1, threshold=TOL_LEMMA))
    return out


@dataclass(frozen=True)
class CrossCheck:
    """One dual-path comparison; ``kind`` selects the evaluator in :mod:`crosscheck`."""

    kind: str
    params: Mapping[str, object] = field(default_factory=dict)
    threshold: float = 1e-8

    def __post_init__(self):
        object.__setattr__(self, "params", MappingProxyType(dict(self.params)))

    def to_dict(self) -> dict:
        d = {}
        for key, val in self.params.items():
            if isinstance(val, DihedralParams):
                val = {"parity": val.parity, "order": val.order, "k0": val.k0, "k1": val.k1}
            elif isinstance(val, PolarPoint):
                val = {"radius": val.radius, "angle": val.angle}
            d[key] = val
        return {"kind": self.kind, "params": d, "threshold": self.threshold}


def random_chamber_pairs(params: DihedralParams, count: int, rng: random.Random):
    w = params.chamber_width
    lo, hi = DKW_RADIUS
    return [(PolarPoint(rng.uniform(lo, hi), rng.uniform(0.0, w)),
             PolarPoint(rng.uniform(lo, hi), rng.uniform(0.0, w))) for _ in range(count)]


def crosscheck_cases(seed: int = DEFAULT_SEED) -> list[CrossCheck]:
    out = []
    for nu, p, R, u, sign in itertools.product(PROP_NU, PROP_P, PROP_R, PROP_U, SIGNS):
        out.append(CrossCheck("proposition", {"nu": nu, "p": p, "R": R, "u": u, "sign": sign},
                              TOL_PROPOSITION))
    for nu, R, zeta in itertools.product(P2_NU, P2_R, P2_ZETA):
        out.append(CrossCheck("p2_vs_series", {"nu": nu, "R": R, "zeta": zeta}, TOL_P2))
        out.append(CrossCheck("p2_vs_corollary", {"nu": nu, "R": R, "zeta": zeta}, TOL_P2))
    for i in range(CUBIC_POINTS):
        u = -1.0 + 2.0 * i / (CUBIC_POINTS - 1)
        out.append(CrossCheck("cubic_equation", {"u": u}, TOL_CUBIC))
        out.append(CrossCheck("cubic_trig", {"u": u}, TOL_CUBIC))
    out.append(CrossCheck("cubic_zero", {}, TOL_CUBIC_ZERO))
    for sign in SIGNS:
        out.append(CrossCheck("p3_vs_series", {"nu": 1, "sign": sign, "R": 2.0, "u": 0.3},
                              TOL_PROPOSITION))
    out.append(CrossCheck("p3_analytic_vs_spectral", {"sign": "+", "R": 1.5, "u": -0.4}, 1e-9))
    rng = random.Random(seed)
    for params in DKW_PARAMS:
        w = params.chamber_width
        y0 = PolarPoint(1.3, w / 3.0)
        for method in ("series", "integral"):
            out.append(CrossCheck("normalization", {"params": params, "y": y0, "method": method},
                                  TOL_NORMALIZATION))
        for x, y in random_chamber_pairs(params, DKW_PAIRS, rng):
            out.append(CrossCheck("dkw_agreement", {"params": params, "x": x, "y": y},
                                  TOL_DKW_AGREEMENT))
            out.append(CrossCheck("dkw_symmetry", {"params": params, "x": x, "y": y},
                                  TOL_SYMMETRY))
    return out
