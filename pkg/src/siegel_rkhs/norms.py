"""Norms and seminorms of the weighted spaces, computed on the ball side.

All values are squared (semi)norms.  ``INFINITE`` marks functions outside the
space, which for polynomials only happens at weight 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.special import roots_jacobi

from .convention import principal_power
from .errors import DimensionMismatch, NotRepresentable, ParameterError
from .exact import ZERO, QQi, to_mpq
from .geometry import SiegelPoint
from .kernels import base, gram_matrix, KernelKind, KernelSpec
from .polynomials import BallPolynomial, ParabolicPolynomial

INFINITE = math.inf


@dataclass
class NormReport:
    value: float
    method: str
    per_degree: list[tuple[int, float]] = field(default_factory=list)

    @property
    def infinite(self) -> bool:
        return math.isinf(self.value)

    def to_json(self) -> dict:
        fmt = lambda x: "inf" if math.isinf(x) else x
        return {
            "value": fmt(self.value),
            "method": self.method,
            "per_degree": [{"k": k, "contribution": fmt(c)} for k, c in self.per_degree],
        }


def _alpha_factorial(alpha) -> int:
    return math.prod(math.factorial(a) for a in alpha)


def fisher_inner(p: BallPolynomial, q: BallPolynomial) -> QQi:
    """<p|q>_F = sum_alpha p_alpha conj(q_alpha) alpha!, exactly."""
    if p.n != q.n:
        raise DimensionMismatch("polynomials of different dimension")
    out = ZERO
    for k, c in p.terms.items():
        d = q.terms.get(k)
        if d is not None:
            out = out + c * d.conj() * _alpha_factorial(k)
    return out


def fisher_norm2(p) -> float:
    """Fisher norm squared; accepts a BallPolynomial or ParabolicPolynomial piece."""
    return float(sum(c.abs2() * _alpha_factorial(k) for k, c in p.terms.items()))


def pochhammer(s: float, k: int) -> float:
    return math.prod(s + j for j in range(k))


def ball_norm_As(f: BallPolynomial, s: float) -> NormReport:
    """2^{-2s/(n+2)} sum_k ||f_k||_F^2 / (s)_k, rising factorial (s)_k."""
    if s < 0:
        raise ParameterError("the weight must be >= 0")
    pre = 2.0 ** (-2 * s / (f.n + 2))
    per = []
    for k, fk in f.homogeneous_parts():
        if s == 0 and k > 0:
            per.append((k, INFINITE))
        else:
            per.append((k, pre * fisher_norm2(fk) / pochhammer(s, k)))
    return NormReport(sum(c for _, c in per), "SERIES", per)


def _check_nonpositive_integer(s) -> int:
    if s > 0 or s != int(s):
        raise ParameterError("s must be an integer <= 0")
    return int(s)


def ball_seminorm_tilde(f: BallPolynomial, s: int) -> NormReport:
    """2^{-2(2-s)/(n+2)} sum_{k >= 1-s} ||f_k||_F^2 / ((-s)! (k+s-1)!)."""
    s = _check_nonpositive_integer(s)
    pre = 2.0 ** (-2 * (2 - s) / (f.n + 2))
    per = []
    for k, fk in f.homogeneous_parts():
        if k >= 1 - s:
            per.append((k, pre * fisher_norm2(fk) / (math.factorial(-s) * math.factorial(k + s - 1))))
        else:
            per.append((k, 0.0))
    return NormReport(sum(c for _, c in per), "SERIES", per)


# ---------------------------------------------------------- quadrature


def bergman_prime_constant(s: float, n: int) -> float:
    """c'_s = 2^{-2s/(n+2)} (s-1)(s-2)...(s-n-1) / pi^{n+1}."""
    return 2.0 ** (-2 * s / (n + 2)) * math.prod(s - j for j in range(1, n + 2)) / math.pi ** (n + 1)


@lru_cache(maxsize=256)
def _jacobi_nodes(nodes: int, a: float):
    x, w = roots_jacobi(nodes, a, 0.0)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def radial_moment(p: int, q: float, nodes: int) -> float:
    """int_0^1 t^p (1-t)^q dt by Gauss-Jacobi on [-1, 1] with t = (1+x)/2."""
    x, w = _jacobi_nodes(nodes, q)
    return float(np.sum(w * (1 + x) ** p)) / 2.0 ** (p + q + 1)


def sphere_moment(alpha) -> float:
    """int over the unit sphere of C^{n+1} of |u^alpha|^2 (surface measure)."""
    n1 = len(alpha)
    return 2 * math.pi ** n1 * _alpha_factorial(alpha) / math.factorial(sum(alpha) + n1 - 1)


def bergman_quadrature_norm(f: BallPolynomial, s: float, resolution: int | None = None) -> NormReport:
    """c'_s int_B |f|^2 (1-|w|^2)^{s-n-2} dw.

    Cross terms of distinct monomials integrate to zero over the sphere;
    each diagonal term splits into a sphere moment and a radial Beta-type
    integral done by Gauss-Jacobi quadrature.
    """
    n = f.n
    if not s > n + 1:
        raise ParameterError("the integral converges only for s > n+1")
    nodes = resolution or max(16, f.degree() + 4)
    c = bergman_prime_constant(s, n)
    q = s - n - 2
    per: dict[int, float] = {}
    for alpha, coef in f.terms.items():
        d = sum(alpha)
        r = 0.5 * radial_moment(d + n, q, nodes)
        per[d] = per.get(d, 0.0) + c * float(coef.abs2()) * sphere_moment(alpha) * r
    items = sorted(per.items())
    return NormReport(sum(v for _, v in items), "QUADRATURE", items)


# ---------------------------------------------- half-space seminorms A_{s,k}


@dataclass
class KernelSpan:
    """f = sum_j c_j base(., q_j)^{-t}."""

    t: float
    nodes: Sequence[SiegelPoint]
    coefficients: Sequence[complex]

    def __call__(self, p: SiegelPoint) -> complex:
        return sum(c * principal_power(base(p, q), -self.t) for c, q in zip(self.coefficients, self.nodes))

    def dilate(self, R: float, s: float) -> "KernelSpan":
        """U_s(delta_R) f, again a kernel span: nodes move to delta_R q."""
        nodes = [SiegelPoint(tuple(R * c for c in q.zeta), R * R * q.z) for q in self.nodes]
        scale = R ** (2 * self.t - s)
        return KernelSpan(self.t, nodes, [c * scale for c in self.coefficients])


@dataclass
class BallPullback:
    """f = C_s^{-1} g for a ball polynomial g; s is the transfer weight."""

    g: BallPolynomial
    s: float

    def __call__(self, p: SiegelPoint) -> complex:
        from .cayley import transfer_to_halfspace

        return transfer_to_halfspace(lambda w: self.g.evaluate(w.w), self.s, p)


def _falling(t: float, k: int) -> float:
    return math.prod(-t - j for j in range(k))


def _span_seminorm(f: KernelSpan, s: float, k: int) -> NormReport:
    s2 = s + 2 * k
    if abs(f.t - (s + k)) > 1e-12:
        raise NotRepresentable("d^k of the span is not a kernel span of weight s+2k")
    factor = _falling(f.t, k) * (2j) ** (-k)
    d = np.array([factor * c for c in f.coefficients], dtype=complex)
    if s2 == 0:
        G = np.ones((len(d), len(d)), dtype=complex)
    else:
        G = gram_matrix(KernelSpec(KernelKind.B_POWER, s2, f.nodes[0].n), list(f.nodes))
    value = float(np.real(np.conj(d) @ G @ d))
    return NormReport(max(value, 0.0), "GRAM")


def _divide_one_minus(T: dict, n1: int, power: int) -> dict:
    """Exact quotient of T by (1 - w_last)^power, or NotRepresentable."""
    for _ in range(power):
        groups: dict = {}
        for key, c in T.items():
            groups.setdefault(key[:-1], {})[key[-1]] = c
        out = {}
        for rest, coeffs in groups.items():
            deg = max(coeffs)
            # T = (1 - x) Q  <=>  Q_j = sum_{i <= j} T_i and the total vanishes
            acc = ZERO
            for j in range(deg + 1):
                acc = acc + coeffs.get(j, ZERO)
                if j < deg and acc:
                    out[rest + (j,)] = acc
            if acc:
                raise NotRepresentable("the transfer is not a polynomial on the ball")
        T = out
    return T


def _pullback_seminorm(f: BallPullback, s: float, k: int) -> NormReport:
    if abs(f.s - s) > 1e-15:
        raise NotRepresentable("pullback weight differs from s")
    n = f.g.n
    sq = to_mpq(s)
    two_i = QQi(0, 2)
    # terms (alpha, m, e) -> c zeta^alpha (z-i)^m (z+i)^{-s-e}
    terms: dict = {}
    for key, c in f.g.terms.items():
        alpha, m = key[:-1], key[-1]
        t = (alpha, m, sum(alpha) + m)
        terms[t] = terms.get(t, ZERO) + c * two_i ** sum(alpha)
    for _ in range(k):
        nxt: dict = {}
        for (alpha, m, e), c in terms.items():
            if m:
                t = (alpha, m - 1, e)
                nxt[t] = nxt.get(t, ZERO) + c * m
            t = (alpha, m, e + 1)
            nxt[t] = nxt.get(t, ZERO) + c * QQi(-sq - e)
        terms = {t: c for t, c in nxt.items() if c}
    # on the ball: (2i)^{m-e} zeta^alpha w^m (1-w)^{e-|alpha|-m-2k}
    shifts = {t: t[2] - sum(t[0]) - t[1] - 2 * k for t in terms}
    N = max([0] + [-v for v in shifts.values()])
    T: dict = {}
    for (alpha, m, e), c in terms.items():
        coef = c * two_i ** (m - e)
        p = shifts[(alpha, m, e)] + N
        for j in range(p + 1):
            key = alpha + (m + j,)
            T[key] = T.get(key, ZERO) + coef * ((-1) ** j * math.comb(p, j))
    T = {key: c for key, c in T.items() if c}
    scale = 2.0 ** (4 * k / (n + 2))
    Q = BallPolynomial._raw(n, _divide_one_minus(T, n + 1, N))
    inner = ball_norm_As(Q, s + 2 * k)
    per = [(d, scale * v) for d, v in inner.per_degree]
    return NormReport(scale * inner.value, "SERIES", per)


def halfspace_seminorm_Ask(f, s: float, k: int) -> NormReport:
    """||d_z^k f||^2 in A_{s+2k}, for polynomials, kernel spans and ball pullbacks."""
    if s + 2 * k < 0:
        raise ParameterError("need s + 2k >= 0")
    if isinstance(f, ParabolicPolynomial):
        d = f.d2(k)
        if not d.terms:
            return NormReport(0.0, "EXACT")
        if s + 2 * k == 0 and set(d.terms) == {(0,) * (f.n + 1)}:
            return NormReport(float(next(iter(d.terms.values())).abs2()), "EXACT")
        return NormReport(INFINITE, "EXACT")
    if isinstance(f, KernelSpan):
        return _span_seminorm(f, s, k)
    if isinstance(f, BallPullback):
        return _pullback_seminorm(f, s, k)
    raise NotRepresentable(f"unsupported function class {type(f).__name__}")


# ------------------------------------------------------ tilde membership


@dataclass
class TildeComponent:
    k: int
    h: int
    component: ParabolicPolynomial
    contribution: float


@dataclass
class TildeReport:
    member: bool
    seminorm2: float
    components: list[TildeComponent]

    def to_json(self) -> dict:
        return {
            "member": self.member,
            "seminorm2": self.seminorm2,
            "components": [
                {"k": c.k, "h": c.h, "contribution": c.contribution, "component": c.component.to_json()}
                for c in self.components
            ],
        }


def tilde_membership(f: ParabolicPolynomial, s: int) -> TildeReport:
    """Per zeta-degree k: pi_k f, the index (1-s-k)_+ and the seminorm part.

    The seminorm squared is the sum of Fisher norms of the zeta-coefficients
    of z^m in pi_k f over m >= (1-s-k)_+; it vanishes exactly on P^{1-s}.
    """
    s = _check_nonpositive_integer(s)
    by_k: dict[int, dict] = {}
    for key, c in f.terms.items():
        by_k.setdefault(sum(key[:-1]), {})[key] = c
    comps = []
    total = 0.0
    for k in sorted(by_k):
        h = max(1 - s - k, 0)
        part = by_k[k]
        contrib = float(sum(c.abs2() * _alpha_factorial(key[:-1]) for key, c in part.items() if key[-1] >= h))
        comps.append(TildeComponent(k, h, ParabolicPolynomial._raw(f.n, part), contrib))
        total += contrib
    return TildeReport(True, total, comps)
