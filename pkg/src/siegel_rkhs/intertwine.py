"""z-derivatives intertwining weighted actions, and the kernel coefficient gamma(s, k)."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import sympy as sp
from gmpy2 import mpq

from .errors import ExactnessError, ParameterError
from .exact import QQi, to_mpq
from .geometry import SiegelPoint, rho
from .groups import act_U_poly, as_exact, compose_inverse_poly
from .kernels import eval_B
from .polynomials import ParabolicPolynomial


@dataclass(frozen=True)
class DerivativeOperator:
    """d^k/dz^k, exact on polynomials and numeric on evaluables."""

    k: int

    def apply(self, P: ParabolicPolynomial) -> ParabolicPolynomial:
        return P.d2(self.k)

    def numeric(self, f: Callable[[SiegelPoint], complex], p: SiegelPoint, nodes: int | None = None) -> complex:
        return numeric_d2k(f, self.k, p, nodes)


# ------------------------------------------------------------ affine maps


def check_affine_intertwine(a, s, k: int, P: ParabolicPolynomial) -> bool:
    """U_{s+2k}(a) d^k P == d^k U_s(a) P, as exact polynomials.

    When R^{-s} is irrational the common factor R^{-s} is cancelled from both
    sides, leaving R^{-2k} (P^{(k)} o a^{-1}) == (P o a^{-1})^{(k)}.
    """
    a = as_exact(a)
    try:
        lhs = act_U_poly(a, to_mpq(s) + 2 * k, P.d2(k))
        rhs = act_U_poly(a, s, P).d2(k)
    except ExactnessError:
        lhs = compose_inverse_poly(a, P.d2(k)).scale(QQi(a.R ** (-2 * k)))
        rhs = compose_inverse_poly(a, P).d2(k)
    return lhs == rhs


# -------------------------------------------------------- inversion, n = 0


def _ff(x: int, k: int) -> int:
    """Falling factorial x (x-1) ... (x-k+1)."""
    return math.prod(x - j for j in range(k))


def _d(laurent: dict[int, mpq], k: int) -> dict[int, mpq]:
    out = {}
    for e, c in laurent.items():
        v = c * _ff(e, k)
        if v:
            out[e - k] = v
    return out


def _lift_iota(laurent: dict[int, mpq], s: int) -> dict[int, mpq]:
    """z^{-s} f(-1/z) for integer s; exact on Laurent polynomials."""
    return {-s - e: c * (-1) ** (e % 2) for e, c in laurent.items()}


@dataclass
class InversionReport:
    s: int
    constant: mpq | None
    passed: bool
    per_h: list[dict] = field(default_factory=list)
    failed_h: int | None = None

    def to_json(self) -> dict:
        return {
            "identity": "inversion_intertwine",
            "params": {"s": self.s, "h_max": len(self.per_h) - 1},
            "exact": self.passed,
            "constant": None if self.constant is None else str(self.constant),
            "witness": None if self.failed_h is None else {"h": self.failed_h},
        }


def check_inversion_intertwine(s: int, h_max: int) -> InversionReport:
    """[U_s(iota) z^h]^{(1-s)} = c(s) U_{2-s}(iota) (z^h)^{(1-s)} for h <= h_max.

    Both sides vanish for h <= -s; c(s) is read off the first h where they
    do not and must then serve every h.
    """
    if s > 0 or s != int(s):
        raise ParameterError("s must be an integer <= 0")
    s = int(s)
    order = 1 - s
    c = None
    per, bad = [], None
    for h in range(h_max + 1):
        f = {h: mpq(1)}
        lhs = _d(_lift_iota(f, s), order)
        rhs = _lift_iota(_d(f, order), 2 - s)
        if c is None and rhs:
            (e, v), = rhs.items()
            c = lhs.get(e, mpq(0)) / v
        expected = {e: v * (c if c is not None else 0) for e, v in rhs.items()}
        ok = lhs == {e: v for e, v in expected.items() if v}
        per.append({"h": h, "lhs": {str(e): str(v) for e, v in lhs.items()},
                    "rhs": {str(e): str(v) for e, v in rhs.items()}, "ok": ok})
        if not ok and bad is None:
            bad = h
    passed = bad is None and (c is None or abs(c) == 1)
    return InversionReport(s, c, passed, per, bad)


# ------------------------------------------------------- kernel coefficient


ALTERNATE_DISPLAY = "(2i)^{-2k} (-s)(-s-1)...(-s-2k)"


@lru_cache(maxsize=64)
def gamma_symbolic(k: int) -> sp.Expr:
    """gamma(s, k) as a polynomial in s, by differentiating base^{-s}.

    z and w = conj(z') are independent symbols; base = (z - w)/(2i) - c.
    """
    s, z, w, c = sp.symbols("s z w c")
    beta = sp.Symbol("beta", positive=True)
    b = (z - w) / (2 * sp.I) - c
    expr = b ** (-s)
    for _ in range(k):
        expr = sp.diff(expr, z)
    for _ in range(k):
        expr = sp.diff(expr, w)
    # put base = beta > 0 so that powers combine without branch conditions
    expr = expr.subs(c, (z - w) / (2 * sp.I) - beta)
    return sp.expand(sp.powsimp(sp.simplify(expr / beta ** (-s - 2 * k)), force=True))


def derivative_kernel_coefficient(s, k: int):
    """(d^k (x) conj(d)^k) B^{-s} = gamma(s, k) B^{-s-2k}; exact for int or sympy s."""
    if k < 0:
        raise ParameterError("k must be >= 0")
    expr = gamma_symbolic(k)
    sym = sp.Symbol("s")
    if isinstance(s, (int, sp.Basic)):
        return sp.expand(expr.subs(sym, s))
    return complex(expr.subs(sym, s))


def gamma_closed_form(s, k: int):
    """(s)(s+1)...(s+2k-1) / 4^k."""
    out = sp.Rational(1, 4 ** k) if isinstance(s, (int, sp.Basic)) else 0.25 ** k
    for j in range(2 * k):
        out = out * (s + j)
    return out


def alternate_display_value(s, k: int) -> complex:
    """Value of ALTERNATE_DISPLAY, which has 2k+1 factors; kept for comparison."""
    return (2j) ** (-2 * k) * math.prod(-s - j for j in range(2 * k + 1))


# ----------------------------------------------------------- numerics


def numeric_d2k(f: Callable[[SiegelPoint], complex], k: int, p: SiegelPoint,
                nodes: int | None = None) -> complex:
    """k-th z-derivative by the trapezoid rule on a circle of radius rho(p)/2."""
    N = nodes or max(64, 16 * k)
    r = rho(p) / 2
    total = 0j
    for j in range(N):
        e = cmath.exp(2j * math.pi * j / N)
        total += f(SiegelPoint(p.zeta, p.z + r * e)) * e ** (-k)
    return math.factorial(k) * total / (N * r ** k)


def numeric_mixed_derivative(s: float, p: SiegelPoint, q: SiegelPoint, k: int = 1,
                             nodes: int | None = None) -> complex:
    """(d_z^k (x) conj(d_{z'})^k) B^{-s} at (p, q), both derivatives numeric."""

    def inner(pp):
        h = lambda qq: eval_B(-s, pp, qq).conjugate()
        return numeric_d2k(h, k, q, nodes).conjugate()

    return numeric_d2k(inner, k, p, nodes)


@dataclass
class KernelDerivativeReport:
    s: float
    k: int
    max_error: float
    passed: bool

    def to_json(self) -> dict:
        return {"identity": "derivative_kernel", "params": {"s": self.s, "k": self.k},
                "max_error": self.max_error, "passed": self.passed}


def check_derivative_kernel(s: float, pairs, k: int = 1, tol: float = 1e-9,
                            nodes: int | None = None) -> KernelDerivativeReport:
    g = complex(derivative_kernel_coefficient(s, k))
    worst = 0.0
    for p, q in pairs:
        num = numeric_mixed_derivative(s, p, q, k, nodes)
        ref = g * eval_B(-(s + 2 * k), p, q)
        worst = max(worst, abs(num - ref) / abs(ref))
    return KernelDerivativeReport(s, k, worst, worst <= tol)
