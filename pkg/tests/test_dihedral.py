import math
import random

import numpy as np
import pytest

from dihedral_bessel.core import ChamberError, DihedralParams, DomainError, PolarPoint
from dihedral_bessel.dihedral import (dkw, dkw_even_integral, dkw_even_series, dkw_odd_integral,
                                      dkw_odd_series, dkw_p2_integral, mixing_coordinate,
                                      normalization_constants)
from dihedral_bessel.manifest import DKW_PARAMS, random_chamber_pairs

HALF = (0.5, 1.0, 1.5)


def test_even_constant_example():
    c = normalization_constants(DihedralParams.even(2, 0.5, 0.5))
    assert c.c_group == pytest.approx(4.0, rel=1e-13)


@pytest.mark.parametrize("k0", HALF)
@pytest.mark.parametrize("k1", HALF)
def test_even_constant_ratio(k0, k1):
    params = DihedralParams.even(2, k0, k1)
    nu = k0 + k1
    assert normalization_constants(params).ratio == pytest.approx(math.gamma(2 * nu + 1) / nu, rel=1e-12)


@pytest.mark.parametrize("p", [1, 3, 4])
def test_even_constant_ratio_general_p(p):
    # the same bridge constant holds for every even group
    for k0, k1 in [(0.5, 0.5), (1.0, 2.0), (1.5, 0.5)]:
        nu = k0 + k1
        ratio = normalization_constants(DihedralParams.even(p, k0, k1)).ratio
        assert ratio == pytest.approx(math.gamma(p * nu + 1) / nu, rel=1e-12)


def test_odd_constant_example():
    c = normalization_constants(DihedralParams.odd(3, 1.0))
    assert c.c_group == pytest.approx(6 * math.pi, rel=1e-13)
    assert c.c_group == pytest.approx(18.8496, abs=1e-4)


@pytest.mark.parametrize("k", [1.0, 2.0])
def test_odd_constant_ratio_actual_value(k):
    # the displayed constants give Gamma(3k+1)/(2k) = 3 Gamma(3k)/2
    ratio = normalization_constants(DihedralParams.odd(3, k)).ratio
    assert ratio == pytest.approx(3 * math.gamma(3 * k) / 2, rel=1e-12)


@pytest.mark.parametrize("k", [1.0, 2.0])
def test_odd_constant_ratio_three_gamma_over_four(k):
    # closed value 3 Gamma(3k)/4 stated for n = 3; the constants above give twice
    # this, so the test fails by design (known discrepancy, see README)
    ratio = normalization_constants(DihedralParams.odd(3, k)).ratio
    assert ratio == pytest.approx(3 * math.gamma(3 * k) / 4, rel=1e-12)


def test_mixing_coordinate():
    for phi, theta in [(0.2, 0.9), (1.0, 0.1)]:
        assert mixing_coordinate(phi, theta, 1.0, 1.0) == pytest.approx(math.cos(theta - phi), abs=1e-15)
    u, v = np.array([0.3, -0.8]), np.array([0.5, 0.1])
    np.testing.assert_allclose(mixing_coordinate(0.0, 0.0, u, v), u, atol=0)
    np.testing.assert_allclose(mixing_coordinate(math.pi / 4, math.pi / 4, u, v), (u + v) / 2,
                               atol=1e-15)


def test_mixing_coordinate_range():
    rng = np.random.default_rng(3)
    z = mixing_coordinate(*rng.uniform(0, math.pi, 2), rng.uniform(-1, 1, 500),
                          rng.uniform(-1, 1, 500))
    assert np.all(np.abs(z) <= 1.0)


@pytest.mark.parametrize("params", DKW_PARAMS, ids=str)
def test_normalization_both_methods(params):
    w = params.chamber_width
    for ang in (0.0, w / 3, w):
        y = PolarPoint(1.3, ang)
        x = PolarPoint(0.0, w / 2)
        for method in ("series", "integral"):
            assert abs(dkw(params, x, y, method).value - 1.0) <= 1e-10


@pytest.mark.parametrize("params", DKW_PARAMS, ids=str)
def test_symmetry(params):
    rng = random.Random(11)
    for x, y in random_chamber_pairs(params, 3, rng):
        assert abs(dkw(params, x, y, "series").value - dkw(params, y, x, "series").value) <= 1e-12
        assert abs(dkw(params, x, y, "integral").value - dkw(params, y, x, "integral").value) <= 1e-8


def test_even_integral_examples():
    params = DihedralParams.even(2, 0.5, 0.5)
    x, y = PolarPoint(1.0, 0.3), PolarPoint(2.0, 0.5)
    assert abs(dkw_even_integral(params, x, y).value - dkw_even_series(params, x, y).value) <= 1e-8
    params = DihedralParams.even(3, 1.0, 1.0)
    x, y = PolarPoint(1.0, 0.1), PolarPoint(1.0, 0.15)
    assert abs(dkw_even_integral(params, x, y).value - dkw_even_series(params, x, y).value) <= 1e-7


def test_odd_integral_example():
    params = DihedralParams.odd(3, 1.0)
    x, y = PolarPoint(1.0, 0.2), PolarPoint(1.5, 0.9)
    assert abs(dkw_odd_integral(params, x, y).value - dkw_odd_series(params, x, y).value) <= 1e-7


@pytest.mark.parametrize("k0,k1", [(0.5, 0.5), (1.0, 1.0), (0.3, 0.9), (1.25, 0.5)])
def test_p2_bessel_integral(k0, k1):
    # real nu is allowed on this route since no derivative is taken
    params = DihedralParams.even(2, k0, k1)
    x, y = PolarPoint(1.0, 0.3), PolarPoint(2.0, 0.5)
    assert abs(dkw_p2_integral(params, x, y).value - dkw_even_series(params, x, y).value) <= 1e-8


def test_endpoint_measure_case():
    # k1 = 1/2 makes mu^{l1} the two-point limit measure
    params = DihedralParams.even(2, 1.5, 0.5)
    x, y = PolarPoint(1.4, 0.2), PolarPoint(0.8, 0.7)
    assert abs(dkw_even_integral(params, x, y).value - dkw_even_series(params, x, y).value) <= 1e-8


def test_shared_fit_matches_per_node_fit():
    params = DihedralParams.odd(3, 1.0)
    x, y = PolarPoint(1.2, 0.4), PolarPoint(0.9, 0.8)
    a = dkw_odd_integral(params, x, y, 16, check_order=False)
    b = dkw_odd_integral(params, x, y, 16, shared_fit=False, check_order=False)
    assert abs(a.value - b.value) <= 1e-12


def test_auto_method():
    params = DihedralParams.even(2, 0.5, 0.5)
    x, y = PolarPoint(1.0, 0.3), PolarPoint(2.0, 0.5)
    rep = dkw(params, x, y, "auto")
    assert rep.value == dkw_even_series(params, x, y).value
    assert rep.abs_error_est <= 1e-8
    assert rep.method == "auto"


def test_series_for_non_integer_nu():
    params = DihedralParams.even(3, 0.7, 0.4)
    x, y = PolarPoint(1.0, 0.3), PolarPoint(2.0, 0.2)
    rep = dkw(params, x, y, "series")
    assert math.isfinite(rep.value) and rep.abs_error_est <= 1e-14
    auto = dkw(params, x, y, "auto")
    assert auto.value == rep.value and auto.quad_order == 0


def test_integral_rejects_non_integer_nu():
    params = DihedralParams.even(2, 0.5, 0.7)
    with pytest.raises(DomainError, match="integer nu"):
        dkw(params, PolarPoint(1.0, 0.3), PolarPoint(1.0, 0.3), "integral")


def test_unknown_method():
    params = DihedralParams.odd(3, 1.0)
    with pytest.raises(DomainError):
        dkw(params, PolarPoint(1.0, 0.3), PolarPoint(1.0, 0.3), "magic")


def test_chamber_validation():
    params = DihedralParams.even(2, 1.0, 1.0)
    outside = PolarPoint(1.0, math.pi / 4 + 0.01)
    with pytest.raises(ChamberError):
        dkw(params, outside, PolarPoint(1.0, 0.1), "series")
    with pytest.raises(ChamberError):
        dkw_even_integral(params, PolarPoint(1.0, 0.1), PolarPoint(1.0, -0.2))
    rep = dkw(params, outside, PolarPoint(1.0, 0.1), "series", strict=False)
    assert math.isfinite(rep.value)


def test_params_validation():
    with pytest.raises(DomainError):
        DihedralParams.odd(4, 1.0)
    with pytest.raises(DomainError):
        DihedralParams.even(2, 0.0, 1.0)
    with pytest.raises(DomainError):
        DihedralParams.even(2, 1.0, -0.5)
    with pytest.raises(DomainError):
        PolarPoint(-1.0, 0.0)
    params = DihedralParams.even(3, 1.0, 0.5)
    assert params.gamma == 4.5 and params.nu == 1.5
    assert params.l0 == 0.5 and params.l1 == 0.0
    assert params.chamber_width == pytest.approx(math.pi / 6)
    assert DihedralParams.odd(5, 2.0).chamber_width == pytest.approx(math.pi / 5)


def test_coincidence_diagnostic():
    # soft property: D(x, x) >= 1 on a small grid
    for params in DKW_PARAMS:
        w = params.chamber_width
        for r in (0.5, 1.5):
            x = PolarPoint(r, w / 3)
            assert dkw(params, x, x, "series").value >= 1.0
