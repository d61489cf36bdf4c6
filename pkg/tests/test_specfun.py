import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from dihedral_bessel.core import DomainError
from dihedral_bessel.specfun import (bessel_i, bessel_i_normalized, gegenbauer_at_one,
                                     gegenbauer_c, gegenbauer_c_all, gegenbauer_w, hyp2f1,
                                     hyp2f1_derivative, jacobi_log_norm_sq, jacobi_orthonormal,
                                     jacobi_orthonormal_all, jacobi_p, pochhammer)
from dihedral_bessel.quadrature import gauss_jacobi

mp.mp.dps = 40


def test_pochhammer_examples():
    assert pochhammer(2, 3) == 24
    assert pochhammer(3.7, 0) == 1
    assert pochhammer(0.5, 2) == 0.75


def test_pochhammer_rejects_negative_n():
    with pytest.raises(DomainError):
        pochhammer(1.0, -1)


def test_bessel_trivial_values():
    assert bessel_i(0, 0) == 1.0
    assert bessel_i(2.5, 0) == 0.0


def test_bessel_half_order():
    assert bessel_i(0.5, 1.0) == pytest.approx(math.sqrt(2 / math.pi) * math.sinh(1.0), rel=1e-15)
    assert bessel_i(0.5, 1.0) == pytest.approx(0.937674, abs=1e-6)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.0, 200.0), st.floats(1e-3, 50.0))
def test_bessel_matches_mpmath(order, x):
    ref = float(mp.besseli(order, x))
    if ref == 0.0 or not math.isfinite(ref):
        return
    assert bessel_i(order, x) == pytest.approx(ref, rel=1e-13)


def test_bessel_integer_symmetry():
    for j in range(6):
        assert bessel_i(-j, 3.3) == bessel_i(j, 3.3)


def test_bessel_domain_errors():
    with pytest.raises(DomainError):
        bessel_i(0.5, -1.0)
    with pytest.raises(DomainError):
        bessel_i(-0.5, 1.0)


def test_normalized_bessel_examples():
    assert bessel_i_normalized(1.3, 0.0) == 1.0
    assert bessel_i_normalized(0.5, 2.0) == pytest.approx(math.sinh(2.0) / 2.0, rel=1e-15)
    assert bessel_i_normalized(0.5, 2.0) == pytest.approx(1.813430, abs=1e-6)
    assert bessel_i_normalized(-0.5, 1.0) == pytest.approx(math.cosh(1.0), rel=1e-15)
    assert bessel_i_normalized(-0.5, 1.0) == pytest.approx(1.543081, abs=1e-6)


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 0.5, 1.0, 2.5])
def test_normalized_conversion(alpha):
    for x in np.linspace(0.05, 30.0, 40):
        lhs = bessel_i_normalized(alpha, x)
        rhs = math.gamma(alpha + 1) * (2 / x) ** alpha * bessel_i(abs(alpha), x) \
            if alpha >= 0 else float(mp.gamma(alpha + 1) * (2 / mp.mpf(x)) ** alpha * mp.besseli(alpha, x))
        assert lhs == pytest.approx(rhs, rel=1e-12)


@pytest.mark.parametrize("nu", [0.5, 1.0, 1.5, 2.0, 3.25])
def test_gauss_duplication(nu):
    lhs = math.sqrt(math.pi) * math.gamma(2 * nu)
    rhs = 2 ** (2 * nu - 1) * math.gamma(nu) * math.gamma(nu + 0.5)
    assert lhs == pytest.approx(rhs, rel=1e-13)


def test_gegenbauer_examples():
    assert gegenbauer_c(0, 1.7, 0.3) == 1.0
    assert gegenbauer_c(1, 1.7, 0.3) == pytest.approx(2 * 1.7 * 0.3, rel=1e-15)
    for j in range(12):
        for nu in (0.5, 1.0, 2.5):
            assert gegenbauer_c(j, nu, 1.0) == pytest.approx(pochhammer(2 * nu, j) / math.factorial(j),
                                                             rel=1e-13)
            assert gegenbauer_at_one(j, nu) == pytest.approx(gegenbauer_c(j, nu, 1.0), rel=1e-13)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 40), st.floats(0.05, 6.0), st.floats(-1.0, 1.0))
def test_gegenbauer_matches_reference(j, nu, x):
    ref = float(special.eval_gegenbauer(j, nu, x))
    assert gegenbauer_c(j, nu, x) == pytest.approx(ref, rel=1e-10, abs=1e-10 * gegenbauer_at_one(j, nu))


def test_gegenbauer_w_examples():
    assert gegenbauer_w(5, 1.5, 1.0) == pytest.approx(1.0, rel=1e-15)
    assert gegenbauer_w(0, 2.0, 0.4) == 1.0
    assert gegenbauer_w(2, 1.0, 0.0) == pytest.approx(-1.0 / 3.0, rel=1e-15)


@pytest.mark.parametrize("nu", [0.25, 0.5, 1.0, 2.0, 3.5])
def test_gegenbauer_w_bounded(nu):
    x = np.linspace(-1, 1, 801)
    c = gegenbauer_c_all(40, nu, x)
    for j in range(41):
        assert np.max(np.abs(c[j] / gegenbauer_at_one(j, nu))) <= 1.0 + 1e-12


def test_jacobi_matches_scipy():
    x = np.linspace(-1, 1, 9)
    for a, b in [(-0.5, 1.5), (0.0, 0.0), (1.5, 0.5), (-0.5, -0.5), (2.0, 3.0)]:
        for j in range(15):
            np.testing.assert_allclose([jacobi_p(j, a, b, t) for t in x],
                                       special.eval_jacobi(j, a, b, x), rtol=1e-12, atol=1e-12)


def test_jacobi_orthonormality():
    a, b = -0.5, 1.5
    nodes, weights = gauss_jacobi(20, a, b)
    p = jacobi_orthonormal_all(6, a, b, nodes)
    gram = (p * weights) @ p.T
    np.testing.assert_allclose(gram, np.eye(7), atol=1e-12)


@pytest.mark.parametrize("k", [0.5, 1.0, 2.0, 3.5])
def test_jacobi_norm_odd_case(k):
    for j in range(10):
        expected = (2 ** k / (2 * j + k) * math.gamma(j + 0.5) * math.gamma(j + k + 0.5)
                    / (math.factorial(j) * math.gamma(j + k)))
        assert math.exp(jacobi_log_norm_sq(j, -0.5, k - 0.5)) == pytest.approx(expected, rel=1e-12)


def test_jacobi_degree_zero_constant():
    a, b = 0.7, 1.2
    mass = 2 ** (a + b + 1) * math.gamma(a + 1) * math.gamma(b + 1) / math.gamma(a + b + 2)
    assert jacobi_orthonormal(0, a, b, 0.3) == pytest.approx(1 / math.sqrt(mass), rel=1e-14)


def test_hyp2f1_at_zero():
    assert hyp2f1(0.3, -1.2, 2.5, 0.0) == 1.0


@pytest.mark.parametrize("a,b,c", [(-1 / 6, 1 / 6, 0.5), (1 / 3, 2 / 3, 1.5), (0.2, 0.4, 1.3)])
def test_hyp2f1_gauss_summation(a, b, c):
    expected = math.gamma(c) * math.gamma(c - a - b) / (math.gamma(c - a) * math.gamma(c - b))
    assert hyp2f1(a, b, c, 1.0) == pytest.approx(expected, rel=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([(-1 / 6, 1 / 6, 0.5), (1 / 3, 2 / 3, 1.5), (0.5, 0.25, 2.0),
                        (1.2, -0.7, 0.9)]), st.floats(0.0, 0.999))
def test_hyp2f1_matches_scipy(abc, x):
    a, b, c = abc
    assert hyp2f1(a, b, c, x) == pytest.approx(float(mp.hyp2f1(a, b, c, x)), rel=1e-12)


def test_hyp2f1_derivative_formula():
    a, b, c, x, h = 1 / 3, 2 / 3, 1.5, 0.3, 1e-5
    fd = (hyp2f1(a, b, c, x + h) - hyp2f1(a, b, c, x - h)) / (2 * h)
    assert hyp2f1_derivative(a, b, c, x) == pytest.approx(fd, abs=1e-8)


def test_hyp2f1_domain():
    with pytest.raises(DomainError):
        hyp2f1(0.1, 0.2, 0.3, 1.5)


@pytest.mark.parametrize("k", [0.5, 1.0, 2.0])
def test_quadratic_transformation_property(k):
    for j in range(9):
        for s in np.linspace(-1, 1, 11):
            lhs = jacobi_p(j, -0.5, k - 0.5, 1 - 2 * s * s)
            rhs = (-1) ** j * pochhammer(0.5, j) / pochhammer(k, j) * gegenbauer_c(2 * j, k, s)
            assert abs(lhs - rhs) <= 1e-10
