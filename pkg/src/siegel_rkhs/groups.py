"""Affine automorphisms of U_{n+1}, the inversion, and the weighted actions.

Heisenberg elements (zeta0, x0) act by

    (zeta0, x0) . (zeta, z) = (zeta0 + zeta, z + x0 + i|zeta0|^2 + 2i<zeta|zeta0>)

and compose by (zeta, x)(zeta', x') = (zeta + zeta', x + x' + 2 Im<zeta|zeta'>).
An affine automorphism is stored in the normal form p -> heis . (R U zeta, R^2 z).
The inversion is iota(zeta, z) = (-i zeta/z, -1/z).

Weights.  For a word w and a point p, ``cocycle_word(w, s, p)`` is the
branch-tracked value of (J w(p))^{s/(n+2)}: the product over letters, in
chain-rule order, of

* R^s for an affine letter (|J| = R^{n+2});
* i^{-ns/(n+2)} z^{-s} for iota (J iota = 1/(i^n z^{n+2}));
* 1 / j(iota, iota p) for the formal inverse of iota.

The weighted action is then act_U(w, s, f, p) = f(w^{-1} p) cocycle_word(w^{-1}, s, p).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import gmpy2
import numpy as np
from gmpy2 import mpq

from .convention import DEFAULT, PhaseConvention, principal_power
from .errors import DimensionMismatch, DomainError, ExactnessError, ParameterError
from .exact import ONE, ZERO, QQi, to_mpq
from .geometry import SiegelPoint, hdot, norm2
from .polynomials import ParabolicPolynomial


def _heis_mul(z1, x1, z2, x2):
    """Heisenberg product (z1, x1)(z2, x2) on float data."""
    return z1 + z2, x1 + x2 + 2.0 * hdot(z1, z2).imag


class AffineAutomorphism:
    """p -> heis(zeta0, x0) . (R U zeta, R^2 z), floating point."""

    __slots__ = ("zeta0", "x0", "R", "U")

    def __init__(self, zeta0: Sequence[complex], x0: float, R: float = 1.0, U=None):
        zeta0 = np.asarray(zeta0, dtype=complex).reshape(-1)
        n = zeta0.shape[0]
        U = np.eye(n, dtype=complex) if U is None else np.asarray(U, dtype=complex)
        if U.shape != (n, n):
            raise DimensionMismatch(f"U has shape {U.shape}, expected {(n, n)}")
        if n and np.max(np.abs(U.conj().T @ U - np.eye(n))) > 1e-12:
            raise ParameterError("U is not unitary to 1e-12")
        if not R > 0:
            raise ParameterError("dilation R must be positive")
        self.zeta0 = zeta0
        self.x0 = float(x0)
        self.R = float(R)
        self.U = U

    # constructors
    @classmethod
    def identity(cls, n: int):
        return cls(np.zeros(n), 0.0)

    @classmethod
    def heis(cls, zeta0, x0):
        return cls(zeta0, x0)

    @classmethod
    def dilation(cls, n: int, R: float):
        return cls(np.zeros(n), 0.0, R)

    @classmethod
    def rotation(cls, U):
        U = np.asarray(U, dtype=complex)
        return cls(np.zeros(U.shape[0]), 0.0, 1.0, U)

    @property
    def n(self) -> int:
        return self.zeta0.shape[0]

    def __call__(self, p: SiegelPoint) -> SiegelPoint:
        if p.n != self.n:
            raise DimensionMismatch("automorphism and point dimensions differ")
        zeta = self.R * (self.U @ np.asarray(p.zeta, dtype=complex)) if self.n else np.zeros(0)
        z = self.R ** 2 * p.z
        z = z + self.x0 + 1j * norm2(self.zeta0) + 2j * hdot(zeta, self.zeta0)
        return SiegelPoint(tuple(self.zeta0 + zeta), z, boundary=p.boundary)

    def inverse(self) -> "AffineAutomorphism":
        Ui = self.U.conj().T
        return AffineAutomorphism(
            -(Ui @ self.zeta0) / self.R if self.n else self.zeta0,
            -self.x0 / self.R ** 2,
            1.0 / self.R,
            Ui,
        )

    def jacobian(self) -> complex:
        """Complex Jacobian determinant R^{n+2} det U."""
        d = np.linalg.det(self.U) if self.n else 1.0
        return self.R ** (self.n + 2) * complex(d)

    def to_json(self) -> dict:
        return {
            "heis": {"zeta": [[c.real, c.imag] for c in self.zeta0], "x": self.x0},
            "R": self.R,
            "U": [[[c.real, c.imag] for c in row] for row in self.U],
        }

    @classmethod
    def from_json(cls, d: dict) -> "AffineAutomorphism":
        zeta = [complex(a, b) for a, b in d["heis"]["zeta"]]
        U = [[complex(a, b) for a, b in row] for row in d["U"]] if zeta else None
        return cls(zeta, d["heis"]["x"], d["R"], U)

    def __repr__(self):
        return f"AffineAutomorphism(zeta0={self.zeta0}, x0={self.x0}, R={self.R})"


def compose(a: AffineAutomorphism, b: AffineAutomorphism) -> AffineAutomorphism:
    """Normal form of a o b."""
    if a.n != b.n:
        raise DimensionMismatch("compose: dimensions differ")
    lz = a.R * (a.U @ b.zeta0) if a.n else b.zeta0
    lx = a.R ** 2 * b.x0
    zeta0, x0 = _heis_mul(a.zeta0, a.x0, lz, lx)
    return AffineAutomorphism(zeta0, x0, a.R * b.R, a.U @ b.U)


def jacobian_modulus(a: AffineAutomorphism) -> float:
    return a.R ** (a.n + 2)


def cocycle_U(a: AffineAutomorphism, s: float) -> float:
    """|J a^{-1}|^{s/(n+2)} = R^{-s}, the multiplier of U_s(a) f = (f o a^{-1}) R^{-s}."""
    return a.R ** (-s)


# ---------------------------------------------------------------- inversion


@dataclass(frozen=True)
class Inversion:
    """The letter iota (power=1) or its formal inverse (power=-1).

    Both act on points by iota; they differ only in the weight, so that a
    word times its inverse carries weight exactly 1.
    """

    power: int = 1

    def __call__(self, p: SiegelPoint) -> SiegelPoint:
        return iota(p)

    def inverse(self) -> "Inversion":
        return Inversion(-self.power)

    def to_json(self):
        return "INV" if self.power == 1 else "INV^-1"


INV = Inversion(1)
INV_INVERSE = Inversion(-1)


def iota(p: SiegelPoint) -> SiegelPoint:
    z = p.z
    if z == 0:
        raise DomainError("iota is undefined at z = 0")
    return SiegelPoint(tuple(-1j * c / z for c in p.zeta), -1.0 / z, boundary=p.boundary)


def iota_jacobian(p: SiegelPoint) -> complex:
    return 1.0 / (1j ** p.n * p.z ** (p.n + 2))


Letter = Union[AffineAutomorphism, Inversion]


class GroupWord:
    """A finite word; the map is letters[0] o letters[1] o ... o letters[-1]."""

    __slots__ = ("letters",)

    def __init__(self, letters: Sequence[Letter] = ()):
        self.letters = tuple(letters)

    @classmethod
    def of(cls, *letters: Letter) -> "GroupWord":
        return cls(letters)

    def __add__(self, other: "GroupWord") -> "GroupWord":
        return GroupWord(self.letters + other.letters)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def inverse(self) -> "GroupWord":
        return GroupWord(tuple(l.inverse() for l in reversed(self.letters)))

    def __call__(self, p: SiegelPoint) -> SiegelPoint:
        return apply_point(self, p)

    def has_inversion(self) -> bool:
        return any(isinstance(l, Inversion) for l in self.letters)

    def to_json(self) -> list:
        return [l.to_json() for l in self.letters]

    @classmethod
    def from_json(cls, data: list) -> "GroupWord":
        out = []
        for item in data:
            if item == "INV":
                out.append(INV)
            elif item == "INV^-1":
                out.append(INV_INVERSE)
            else:
                out.append(AffineAutomorphism.from_json(item))
        return cls(out)


def as_word(w) -> GroupWord:
    if isinstance(w, GroupWord):
        return w
    if isinstance(w, (AffineAutomorphism, Inversion)):
        return GroupWord((w,))
    return GroupWord(w)


def apply_point(w, p: SiegelPoint) -> SiegelPoint:
    for letter in reversed(as_word(w).letters):
        p = letter(p)
    return p


def letter_cocycle(
    letter: Letter, s: float, p: SiegelPoint, convention: PhaseConvention = DEFAULT
) -> complex:
    """(J letter (p))^{s/(n+2)} with the fixed branch conventions."""
    if isinstance(letter, AffineAutomorphism):
        return complex(letter.R ** s)
    if letter.power == 1:
        return convention.iota_constant(p.n, s) * principal_power(p.z, -s)
    return 1.0 / letter_cocycle(INV, s, iota(p), convention)


def cocycle_word(w, s: float, p: SiegelPoint, convention: PhaseConvention = DEFAULT) -> complex:
    total = 1.0 + 0j
    for letter in reversed(as_word(w).letters):
        total *= letter_cocycle(letter, s, p, convention)
        p = letter(p)
    return total


def iota_square_phase(n: int, s: float, convention: PhaseConvention = DEFAULT) -> complex:
    """Weight of the word [INV, INV], a constant since iota o iota = id on points."""
    return convention.iota_constant(n, s) ** 2 * cmath.exp(-1j * math.pi * s)


def act_U(
    w,
    s: float,
    f: Callable[[SiegelPoint], complex],
    p: SiegelPoint,
    convention: PhaseConvention = DEFAULT,
) -> complex:
    wi = as_word(w).inverse()
    return f(apply_point(wi, p)) * cocycle_word(wi, s, p, convention)


def word_jacobian(w, p: SiegelPoint) -> complex:
    """Complex Jacobian determinant of the word at p (chain rule)."""
    total = 1.0 + 0j
    for letter in reversed(as_word(w).letters):
        total *= letter.jacobian() if isinstance(letter, AffineAutomorphism) else iota_jacobian(p)
        p = letter(p)
    return total


# ------------------------------------------------------------ exact affines


def _qvec(v) -> tuple[QQi, ...]:
    return tuple(QQi.coerce(c) for c in v)


def _qdot(a, b) -> QQi:
    """<a|b> in Q(i)."""
    out = ZERO
    for x, y in zip(a, b):
        out = out + x * y.conj()
    return out


class ExactAffine:
    """Affine automorphism with Q(i) data: rational R, exactly unitary U."""

    __slots__ = ("zeta0", "x0", "R", "U")

    def __init__(self, zeta0, x0, R=1, U=None):
        self.zeta0 = _qvec(zeta0)
        n = len(self.zeta0)
        self.x0 = to_mpq(x0)
        self.R = to_mpq(R)
        if not self.R > 0:
            raise ParameterError("dilation R must be positive")
        if U is None:
            U = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
        self.U = tuple(_qvec(row) for row in U)
        if len(self.U) != n or any(len(r) != n for r in self.U):
            raise DimensionMismatch("U has the wrong shape")
        for i in range(n):
            for j in range(n):
                col = _qdot([r[j] for r in self.U], [r[i] for r in self.U])
                if col != (ONE if i == j else ZERO):
                    raise ExactnessError("U is not exactly unitary")

    @property
    def n(self) -> int:
        return len(self.zeta0)

    @classmethod
    def identity(cls, n: int):
        return cls([0] * n, 0)

    @classmethod
    def from_float(cls, a: AffineAutomorphism) -> "ExactAffine":
        """Exact conversion of the binary floats in ``a``; fails unless U is exactly unitary."""
        return cls(
            [QQi(c.real, c.imag) for c in a.zeta0],
            a.x0,
            a.R,
            [[QQi(c.real, c.imag) for c in row] for row in a.U],
        )

    def to_float(self) -> AffineAutomorphism:
        U = np.array([[complex(c) for c in row] for row in self.U], dtype=complex).reshape(self.n, self.n)
        return AffineAutomorphism([complex(c) for c in self.zeta0], float(self.x0), float(self.R), U)

    def _matvec(self, v):
        return tuple(
            sum((self.U[i][j] * v[j] for j in range(self.n)), ZERO) * self.R for i in range(self.n)
        )

    def compose(self, b: "ExactAffine") -> "ExactAffine":
        if b.n != self.n:
            raise DimensionMismatch("compose: dimensions differ")
        lz = self._matvec(b.zeta0)
        lx = self.R ** 2 * b.x0
        zeta0 = tuple(x + y for x, y in zip(self.zeta0, lz))
        x0 = self.x0 + lx + 2 * _qdot(self.zeta0, lz).im
        U = [
            [sum((self.U[i][k] * b.U[k][j] for k in range(self.n)), ZERO) for j in range(self.n)]
            for i in range(self.n)
        ]
        return ExactAffine(zeta0, x0, self.R * b.R, U)

    def inverse(self) -> "ExactAffine":
        n = self.n
        Ui = [[self.U[j][i].conj() for j in range(n)] for i in range(n)]
        z = tuple(
            -sum((Ui[i][j] * self.zeta0[j] for j in range(n)), ZERO) / QQi(self.R) for i in range(n)
        )
        return ExactAffine(z, -self.x0 / self.R ** 2, 1 / self.R, Ui)

    def substitution(self) -> list[ParabolicPolynomial]:
        """Coordinates of this map as polynomials in (zeta, z)."""
        n = self.n
        P = ParabolicPolynomial
        images = []
        for i in range(n):
            terms = {}
            for j in range(n):
                c = self.U[i][j] * self.R
                if c:
                    e = [0] * (n + 1)
                    e[j] = 1
                    terms[tuple(e)] = c
            if self.zeta0[i]:
                terms[(0,) * (n + 1)] = self.zeta0[i]
            images.append(P(n, terms))
        # z -> R^2 z + x0 + i|zeta0|^2 + 2i <R U zeta | zeta0>
        terms = {(0,) * n + (1,): QQi(self.R ** 2)}
        c0 = QQi(self.x0, sum((c.abs2() for c in self.zeta0), mpq(0)))
        if c0:
            terms[(0,) * (n + 1)] = c0
        for j in range(n):
            d = sum((self.U[i][j] * self.zeta0[i].conj() for i in range(n)), ZERO) * QQi(0, 2) * self.R
            if d:
                e = [0] * (n + 1)
                e[j] = 1
                terms[tuple(e)] = d
        images.append(P(n, terms))
        return images


def exact_power(base: mpq, exponent) -> mpq:
    """base**exponent for rational base > 0 and rational exponent, if rational."""
    e = to_mpq(exponent)
    num, den = int(e.numerator), int(e.denominator)
    if den == 1:
        return base ** num
    rn, okn = gmpy2.iroot(gmpy2.mpz(base.numerator), den)
    rd, okd = gmpy2.iroot(gmpy2.mpz(base.denominator), den)
    if not (okn and okd):
        raise ExactnessError(f"{base}^{exponent} is not rational")
    return mpq(rn, rd) ** num


def as_exact(a) -> ExactAffine:
    if isinstance(a, ExactAffine):
        return a
    if isinstance(a, AffineAutomorphism):
        return ExactAffine.from_float(a)
    raise ExactnessError(f"not an affine automorphism: {a!r}")


def compose_inverse_poly(a: ExactAffine, P: ParabolicPolynomial) -> ParabolicPolynomial:
    """P o a^{-1}, without weight."""
    if P.n != a.n:
        raise DimensionMismatch("polynomial and map dimensions differ")
    if not P.terms:
        return P
    return P.substitute(a.inverse().substitution())


def act_U_poly(a, s, P: ParabolicPolynomial) -> ParabolicPolynomial:
    """U_s(a) P = (P o a^{-1}) R^{-s}, exactly."""
    a = as_exact(a)
    weight = exact_power(a.R, -to_mpq(s))
    return compose_inverse_poly(a, P).scale(QQi(weight))


def word_from_json(data) -> GroupWord:
    return GroupWord.from_json(data)
