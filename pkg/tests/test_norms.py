import math

import numpy as np
import pytest
import sympy as sp
from scipy.special import roots_genlaguerre

from siegel_rkhs.errors import NotRepresentable, ParameterError
from siegel_rkhs.exact import QQi
from siegel_rkhs.geometry import SiegelPoint
from siegel_rkhs.groups import AffineAutomorphism, ExactAffine, act_U, act_U_poly
from siegel_rkhs.kernels import eval_B
from siegel_rkhs.norms import (INFINITE, BallPullback, KernelSpan, ball_norm_As, ball_seminorm_tilde,
                               bergman_quadrature_norm, fisher_inner, halfspace_seminorm_Ask, tilde_membership)
from siegel_rkhs.polynomials import BallPolynomial as BP, ParabolicPolynomial as PP, multi_indices
from siegel_rkhs.sampling import random_siegel_point, random_unitary


def monomials(n, max_degree):
    return [BP.monomial(n, a) for d in range(max_degree + 1) for a in multi_indices(n + 1, d)]


def test_fisher_examples():
    assert fisher_inner(BP.constant(0, 1), BP.constant(0, 1)) == 1
    w2 = BP.monomial(0, (2,))
    assert fisher_inner(w2, w2) == 2


def test_fisher_is_p_of_nabla_applied_to_q_star():
    w1, w2 = sp.symbols("w1 w2")
    cases = [((2, 1), (2, 1)), ((1, 0), (0, 1)), ((3, 0), (3, 0))]
    for a, b in cases:
        q_star = w1 ** b[0] * w2 ** b[1]
        val = sp.diff(q_star, w1, a[0], w2, a[1]) if sum(a) else q_star
        expected = val.subs({w1: 0, w2: 0})
        got = fisher_inner(BP.monomial(1, a), BP.monomial(1, b))
        assert got == QQi(int(expected))


def test_fisher_sesquilinear():
    p = BP(1, {(1, 0): QQi(0, 1), (0, 2): 2})
    q = BP(1, {(1, 0): 3, (0, 2): QQi(1, 1)})
    assert fisher_inner(p, q) == QQi(0, 3) + QQi(2) * QQi(1, -1) * 2
    assert fisher_inner(q, p) == fisher_inner(p, q).conj()


def gaussian_pairing(alpha):
    """(1/pi^{n+1}) int |w^alpha|^2 exp(-|w|^2) dw via Gauss-Laguerre per coordinate."""
    total = 1.0
    for a in alpha:
        # one complex variable: (1/pi) int |w|^{2a} e^{-|w|^2} = int_0^inf t^a e^{-t} dt
        x, wts = roots_genlaguerre(max(a, 1) + 2, 0.0)
        total *= float(np.sum(wts * x ** a))
    return total


def test_fisher_matches_gaussian_integral():
    for n in (0, 1):
        for f in monomials(n, 6):
            (alpha,) = f.terms
            assert float(fisher_inner(f, f).re) == pytest.approx(gaussian_pairing(alpha), rel=1e-12)


def test_ball_norm_examples():
    assert ball_norm_As(BP.monomial(0, (1,)), 2).value == pytest.approx(1 / 8)
    assert ball_norm_As(BP.constant(0, 3), 0).value == 9
    assert ball_norm_As(BP.monomial(0, (1,)), 0).value == INFINITE
    assert ball_norm_As(BP.zero(0), 1).value == 0
    with pytest.raises(ParameterError):
        ball_norm_As(BP.constant(0, 1), -1)


def test_norm_report_json():
    rep = ball_norm_As(BP.monomial(0, (1,)), 0)
    assert rep.to_json() == {"value": "inf", "method": "SERIES", "per_degree": [{"k": 1, "contribution": "inf"}]}
    rep = ball_norm_As(BP(0, {(0,): 1, (2,): 1}), 2)
    assert rep.value == sum(c for _, c in rep.per_degree)


def test_tilde_examples():
    assert ball_seminorm_tilde(BP.monomial(0, (1,)), 0).value == pytest.approx(1 / 4)
    assert ball_seminorm_tilde(BP.constant(0, 5), 0).value == 0
    for f in monomials(1, 1):
        assert ball_seminorm_tilde(f, -1).value == 0
    assert ball_seminorm_tilde(BP.monomial(1, (1, 1)), -1).value > 0
    with pytest.raises(ParameterError):
        ball_seminorm_tilde(BP.constant(0, 1), 0.5)


def test_quadrature_examples():
    assert bergman_quadrature_norm(BP.constant(0, 1), 3).value == pytest.approx(1 / 8, rel=1e-12)
    assert bergman_quadrature_norm(BP.monomial(0, (1,)), 3).value == pytest.approx(1 / 24, rel=1e-10)
    assert bergman_quadrature_norm(BP.zero(0), 3).value == 0
    with pytest.raises(ParameterError):
        bergman_quadrature_norm(BP.constant(1, 1), 2)


@pytest.mark.parametrize("n", [0, 1])
def test_series_equals_quadrature(n):
    for s in (n + 1.5, n + 3):
        for f in monomials(n, 6):
            a = ball_norm_As(f, s).value
            b = bergman_quadrature_norm(f, s).value
            assert abs(a - b) / a <= 1e-8


def test_quadrature_mixed_polynomial():
    f = BP(1, {(0, 0): 1, (1, 2): QQi(0, 2), (3, 0): QQi("1/2", -1)})
    assert bergman_quadrature_norm(f, 4.2).value == pytest.approx(ball_norm_As(f, 4.2).value, rel=1e-10)


def numeric_compose(f, V):
    """f(V w) expanded with exact coefficients taken from the float unitary."""
    n = f.n
    images = [BP(n, {tuple(int(i == j) for i in range(n + 1)): QQi(V[k, j].real, V[k, j].imag)
                     for j in range(n + 1)}) for k in range(n + 1)]
    return f.substitute(images, BP)


@pytest.mark.parametrize("n", [0, 1])
def test_unitary_invariance(rng, n):
    f = BP(n, {tuple([1] * (n + 1)): 1, (0,) * n + (2,): QQi(0, 1), (0,) * (n + 1): 2})
    ref = ball_norm_As(f, 2.5).value
    for _ in range(20):
        V = random_unitary(rng, n + 1)
        assert ball_norm_As(numeric_compose(f, V), 2.5).value == pytest.approx(ref, rel=1e-10)
    # signed permutation, exact
    if n == 1:
        g = f.substitute([-BP.variable(1, 1), BP.variable(1, 0)], BP)
        assert ball_norm_As(g, 2.5).value == ref


# ------------------------------------------------ half-space seminorms


def test_polynomial_inputs():
    x = PP.z(0)
    assert halfspace_seminorm_Ask(PP.constant(0, 4), 0, 2).value == 0
    assert halfspace_seminorm_Ask(x, -2, 1).value == 1
    assert halfspace_seminorm_Ask(x ** 2, 0, 1).value == INFINITE


def test_dirichlet_pullback():
    g = BP.monomial(0, (1,))
    assert halfspace_seminorm_Ask(BallPullback(g, 0), 0, 1).value == pytest.approx(0.25)


def test_pullback_evaluates_like_transfer():
    g = BP(0, {(1,): 1, (3,): QQi(0, 2)})
    f = BallPullback(g, -1)
    p = SiegelPoint((), 0.3 + 1.2j)
    from siegel_rkhs.cayley import transfer_to_halfspace
    assert f(p) == transfer_to_halfspace(lambda w: g.evaluate(w.w), -1, p)


@pytest.mark.parametrize("s", [0, -1, -2, -3])
def test_halfspace_to_tilde_ratio_is_constant(s):
    k = 1 - s
    ratios = []
    for d in range(0, 6 - s):
        g = BP(0, {(d,): 1, (d + 1,): QQi(1, 2), (d + 3,): QQi("-1/3")})
        a = halfspace_seminorm_Ask(BallPullback(g, s), s, k).value
        b = ball_seminorm_tilde(g, s).value
        if b == 0:
            assert a == pytest.approx(0, abs=1e-14)
        else:
            ratios.append(a / b)
    assert max(ratios) - min(ratios) <= 1e-12 * max(ratios)


def test_nonpolynomial_transfer_not_representable():
    with pytest.raises(NotRepresentable):
        halfspace_seminorm_Ask(BallPullback(BP.monomial(1, (1, 1)), -1), -1, 2)
    with pytest.raises(NotRepresentable):
        halfspace_seminorm_Ask(lambda p: p.z, 0, 1)


def antiderivative_span(s, k, q):
    t = s + k
    c = 1 / (math.prod(-t - j for j in range(k)) * (2j) ** (-k))
    return KernelSpan(t, [q], [c])


@pytest.mark.parametrize("s,k", [(0.5, 1), (1.0, 2), (-1.0, 2)])
def test_kernel_span_reproduces_diagonal(rng, s, k):
    q = random_siegel_point(rng, 1)
    val = halfspace_seminorm_Ask(antiderivative_span(s, k, q), s, k).value
    assert val == pytest.approx(eval_B(-(s + 2 * k), q, q).real, rel=1e-12)


def test_kernel_span_wrong_weight():
    q = SiegelPoint((), 1j)
    with pytest.raises(NotRepresentable):
        halfspace_seminorm_Ask(KernelSpan(3.0, [q], [1.0]), 0.5, 1)


@pytest.mark.parametrize("R", [0.5, 2.0])
def test_dilation_invariance(rng, R):
    s, k = 0.5, 1
    nodes = [random_siegel_point(rng, 1) for _ in range(3)]
    f = KernelSpan(s + k, nodes, [1.0, -0.5j, 2.0])
    g = f.dilate(R, s)
    p = random_siegel_point(rng, 1)
    # the dilated span is U_s(delta_R) f
    assert g(p) == pytest.approx(act_U(AffineAutomorphism.dilation(1, R), s, f, p), rel=1e-12)
    assert halfspace_seminorm_Ask(g, s, k).value == pytest.approx(halfspace_seminorm_Ask(f, s, k).value, rel=1e-8)


@pytest.mark.parametrize("R", [2, "1/3"])
def test_polynomial_dilation_invariance(R):
    x = PP.z(0)
    a = ExactAffine((), 0, R)
    for s, k, P in [(-2, 1, x.scale(QQi(3, 1)) + PP.constant(0, 1)), (-4, 2, x * x + x)]:
        Q = act_U_poly(a, s, P)
        assert halfspace_seminorm_Ask(Q, s, k).value == halfspace_seminorm_Ask(P, s, k).value


# ------------------------------------------------------ tilde membership


def test_tilde_membership_examples():
    z1, x = PP.zeta(1, 0), PP.z(1)
    rep = tilde_membership(z1, 0)
    assert rep.member and rep.seminorm2 == 1
    assert [(c.k, c.h) for c in rep.components] == [(1, 0)]
    assert tilde_membership(PP.zero(1), -1).seminorm2 == 0
    with pytest.raises(ParameterError):
        tilde_membership(x, 1)


@pytest.mark.parametrize("s", [0, -1, -2])
def test_tilde_null_space_is_low_degree(s):
    keys = [(a, m) for a in range(5) for m in range(5)]
    for a, m in keys:
        P = PP.monomial(1, (a, m))
        null = a + m < 1 - s
        assert (tilde_membership(P, s).seminorm2 == 0) == null


def test_tilde_rotation_invariance():
    # the per-degree Fisher norm on P_k(C^2) is invariant under zeta -> (zeta_2, -zeta_1)
    z1, z2, x = PP.zeta(2, 0), PP.zeta(2, 1), PP.z(2)
    P = z1 * z1 * x + z2.scale(QQi(0, 3)) * x * x + z1 * z2
    Q = P.substitute([z2, -z1, x])
    assert tilde_membership(P, -1).seminorm2 == tilde_membership(Q, -1).seminorm2
