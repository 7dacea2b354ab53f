import cmath

import pytest
import sympy as sp
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from siegel_rkhs.errors import ParameterError
from siegel_rkhs.exact import QQi
from siegel_rkhs.geometry import SiegelPoint
from siegel_rkhs.groups import ExactAffine
from siegel_rkhs.intertwine import (ALTERNATE_DISPLAY, DerivativeOperator, alternate_display_value,
                                    check_affine_intertwine, check_derivative_kernel,
                                    check_inversion_intertwine, derivative_kernel_coefficient,
                                    gamma_closed_form, numeric_d2k, numeric_mixed_derivative)
from siegel_rkhs.kernels import eval_B
from siegel_rkhs.polynomials import ParabolicPolynomial as PP, multi_indices
from siegel_rkhs.sampling import random_siegel_point
from siegel_rkhs.subspaces import random_exact_affine


def parabolic_monomials(n, max_degree):
    out = []
    for d in range(max_degree + 1):
        for m in range(d // 2 + 1):
            for a in multi_indices(n, d - 2 * m):
                out.append(PP.monomial(n, tuple(a) + (m,)))
    return out


def test_derivative_operator():
    x = PP.z(0)
    assert DerivativeOperator(2).apply(x ** 3) == x.scale(QQi(6))
    assert DerivativeOperator(0).apply(x) == x


@pytest.mark.parametrize("a", [
    ExactAffine.identity(1),
    ExactAffine((0,), 0, 2),
    ExactAffine((QQi(1, 1),), "1/2"),
    ExactAffine((QQi(0, 1),), 3, "1/3"),
])
def test_affine_examples(a):
    z1, x = PP.zeta(1, 0), PP.z(1)
    for P in (x * x, z1 * x, z1 * z1 * x * x + x):
        for s in (0, 1, mpq(5, 2), -3):
            for k in (1, 2):
                assert check_affine_intertwine(a, s, k, P)


def test_affine_wrong_weight_fails():
    from siegel_rkhs.groups import act_U_poly
    a = ExactAffine((0,), 0, 2)
    P = PP.z(1) ** 2
    # without the +2k weight shift the two sides differ by R^{2k}
    assert act_U_poly(a, 1, P.d2(1)) != act_U_poly(a, 1, P).d2(1)


@pytest.mark.parametrize("n", [0, 1, 2])
def test_random_exact_maps(rng, n):
    mons = parabolic_monomials(n, 4)
    for _ in range(5):
        a = random_exact_affine(rng, n)
        for k in (1, 2):
            for s in (mpq(1, 3), 0.7071):
                P = mons[rng.integers(0, len(mons))] + mons[rng.integers(0, len(mons))]
                assert check_affine_intertwine(a, s, k, P)


@pytest.mark.parametrize("s", [0, -1, -2, -3])
def test_inversion_intertwine(s):
    rep = check_inversion_intertwine(s, 6)
    assert rep.passed and rep.constant == 1
    assert rep.to_json()["params"] == {"s": s, "h_max": 6}
    # low degrees are killed on both sides
    for row in rep.per_h[: -s + 1]:
        assert row["lhs"] == {} and row["rhs"] == {}


def test_inversion_parameter_errors():
    with pytest.raises(ParameterError):
        check_inversion_intertwine(1, 3)
    with pytest.raises(ParameterError):
        check_inversion_intertwine(-0.5, 3)


def test_gamma_small_k():
    s = sp.Symbol("s")
    assert derivative_kernel_coefficient(s, 0) == 1
    assert sp.expand(derivative_kernel_coefficient(s, 1) - s * (s + 1) / 4) == 0
    assert derivative_kernel_coefficient(2, 1) == sp.Rational(3, 2)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_gamma_symbolic_matches_closed_form(k):
    s = sp.Symbol("s")
    assert sp.expand(derivative_kernel_coefficient(s, k) - gamma_closed_form(s, k)) == 0


def test_gamma_composition_law():
    s = sp.Symbol("s")
    for k1 in range(5):
        for k2 in range(5 - k1):
            lhs = gamma_closed_form(s, k1) * gamma_closed_form(s + 2 * k1, k2)
            assert sp.expand(lhs - gamma_closed_form(s, k1 + k2)) == 0


@settings(max_examples=50)
@given(st.floats(0.01, 20), st.integers(0, 4))
def test_gamma_positive_for_positive_s(s, k):
    assert gamma_closed_form(s, k) > 0


def test_alternate_display_differs():
    assert "2k" in ALTERNATE_DISPLAY
    s, k = 1.5, 1
    assert abs(alternate_display_value(s, k) - gamma_closed_form(s, k)) > 0.1


def test_numeric_d2k_examples():
    p = SiegelPoint((), 1j)
    assert numeric_d2k(lambda q: q.z ** 2, 1, p) == pytest.approx(2j, abs=1e-12)
    assert numeric_d2k(lambda q: q.z ** 2, 0, p) == pytest.approx(-1, abs=1e-12)
    f = lambda q: cmath.exp(q.z)
    assert numeric_d2k(f, 3, p) == pytest.approx(cmath.exp(1j), abs=1e-12)


def test_numeric_d2k_on_kernel(rng):
    p, q = random_siegel_point(rng, 1), random_siegel_point(rng, 1)
    s = 1.3
    num = numeric_d2k(lambda r: eval_B(-s, r, q), 2, p)
    # d_z base = 1/(2i), so d^2 base^{-s} = (-s)(-s-1) (2i)^{-2} base^{-s-2}
    ref = (-s) * (-s - 1) * (2j) ** -2 * eval_B(-(s + 2), p, q)
    assert num == pytest.approx(ref, rel=1e-10)


@pytest.mark.parametrize("s,k", [(0.5, 1), (2.0, 1), (1.5, 2)])
def test_mixed_derivative(rng, s, k):
    pairs = [(random_siegel_point(rng, 1), random_siegel_point(rng, 1)) for _ in range(5)]
    rep = check_derivative_kernel(s, pairs, k, tol=1e-9)
    assert rep.passed, rep.max_error


def test_mixed_derivative_rejects_wrong_coefficient(rng):
    p, q = random_siegel_point(rng, 0), random_siegel_point(rng, 0)
    num = numeric_mixed_derivative(2.0, p, q)
    wrong = alternate_display_value(2.0, 1) * eval_B(-4.0, p, q)
    assert abs(num - wrong) > 1e-3 * abs(num)
