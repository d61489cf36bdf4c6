"""Generalized Bessel functions of dihedral groups, by series and by closed forms."""
from .closedform import (ChebSeries, corollary_rhs, cubic_root_z, nth_derivative_on_interval,
                         p2_closed, p3_closed, proposition_rhs, shifted_exp_sum)
from .core import (ChamberError, ConvergenceError, DihedralBesselError, DihedralParams,
                   DomainError, EvalControl, EvalReport, FitNotResolvedError, NonFiniteError,
                   PolarPoint, QuadratureOrderError)
from .dihedral import (dkw, dkw_even_integral, dkw_odd_integral, dkw_p2_integral,
                       mixing_coordinate, normalization_constants)
from .genseries import corollary_lhs, f_series, gbf_even_series, gbf_odd_series, lemma_series_lhs
from .identities import IdentityCase, identity_residual, roots_of_unity_filter
from .quadrature import QuadRule, build_rule, integrate_mu
from .specfun import (bessel_i, bessel_i_normalized, gegenbauer_c, gegenbauer_w, hyp2f1,
                      jacobi_orthonormal, pochhammer)

__version__ = "0.1.0"

__all__ = [
    "ChebSeries", "corollary_rhs", "cubic_root_z", "nth_derivative_on_interval", "p2_closed",
    "p3_closed", "proposition_rhs", "shifted_exp_sum", "ChamberError", "ConvergenceError",
    "DihedralBesselError", "DihedralParams", "DomainError", "EvalControl", "EvalReport",
    "FitNotResolvedError", "NonFiniteError", "PolarPoint", "QuadratureOrderError", "dkw",
    "dkw_even_integral", "dkw_odd_integral", "dkw_p2_integral", "mixing_coordinate",
    "normalization_constants", "corollary_lhs", "f_series", "gbf_even_series", "gbf_odd_series",
    "lemma_series_lhs", "IdentityCase", "identity_residual", "roots_of_unity_filter", "QuadRule",
    "build_rule", "integrate_mu", "bessel_i", "bessel_i_normalized", "gegenbauer_c",
    "gegenbauer_w", "hyp2f1", "jacobi_orthonormal", "pochhammer",
]
