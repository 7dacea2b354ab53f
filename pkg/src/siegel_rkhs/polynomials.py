"""Sparse polynomials with exact Q(i) coefficients.

A polynomial in N variables is a dict mapping exponent tuples of length N to
nonzero QQi coefficients.  Two flavours share the machinery:

* ``ParabolicPolynomial`` in (zeta_1..zeta_n, z), graded by the parabolic
  degree |alpha| + 2m of zeta^alpha z^m;
* ``BallPolynomial`` in (w_1..w_{n+1}), graded by ordinary degree.
"""
from __future__ import annotations

import math
from collections import defaultdict
from typing import Iterable, Sequence

from .errors import DimensionMismatch
from .exact import ONE, ZERO, QQi, rat_str, to_mpq

Key = tuple[int, ...]


def _clean(terms) -> dict[Key, QQi]:
    return {k: v for k, v in terms.items() if v}


class _SparsePoly:
    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict | None = None):
        self.n = n
        out = {}
        if terms:
            width = n + 1
            for k, v in terms.items():
                k = tuple(int(e) for e in k)
                if len(k) != width or min(k) < 0:
                    raise DimensionMismatch(f"exponent {k} for n={n}")
                v = QQi.coerce(v)
                if v:
                    out[k] = v
        self.terms = out

    @classmethod
    def _raw(cls, n: int, terms: dict[Key, QQi]):
        obj = cls.__new__(cls)
        obj.n = n
        obj.terms = terms
        return obj

    # construction -----------------------------------------------------
    @classmethod
    def zero(cls, n: int):
        return cls._raw(n, {})

    @classmethod
    def constant(cls, n: int, c=1):
        c = QQi.coerce(c)
        return cls._raw(n, {(0,) * (n + 1): c} if c else {})

    @classmethod
    def monomial(cls, n: int, exps: Sequence[int], c=1):
        return cls(n, {tuple(exps): c})

    @classmethod
    def variable(cls, n: int, j: int):
        e = [0] * (n + 1)
        e[j] = 1
        return cls._raw(n, {tuple(e): ONE})

    # arithmetic -------------------------------------------------------
    def _check(self, other):
        if type(other) is not type(self) or other.n != self.n:
            raise DimensionMismatch("incompatible polynomials")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return self._raw(self.n, _clean(out))

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return self._raw(self.n, {k: -v for k, v in self.terms.items()})

    def scale(self, c):
        c = QQi.coerce(c)
        if not c:
            return self.zero(self.n)
        return self._raw(self.n, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, _SparsePoly):
            return self.scale(other)
        self._check(other)
        acc: dict[Key, list] = defaultdict(lambda: [0, 0])
        for k1, v1 in self.terms.items():
            a, b = v1.re, v1.im
            for k2, v2 in other.terms.items():
                c, d = v2.re, v2.im
                slot = acc[tuple(x + y for x, y in zip(k1, k2))]
                slot[0] += a * c - b * d
                slot[1] += a * d + b * c
        return self._raw(self.n, _clean({k: QQi(r, i) for k, (r, i) in acc.items()}))

    __rmul__ = scale

    def __pow__(self, e: int):
        out = self.constant(self.n, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        return type(other) is type(self) and other.n == self.n and other.terms == self.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    # calculus and evaluation ------------------------------------------
    def derivative(self, j: int, order: int = 1):
        out = {}
        for k, v in self.terms.items():
            e = k[j]
            if e < order:
                continue
            nk = list(k)
            nk[j] = e - order
            out[tuple(nk)] = v * math.perm(e, order)
        return self._raw(self.n, out)

    def evaluate(self, coords: Sequence[complex]) -> complex:
        coords = [complex(c) for c in coords]
        total = 0j
        for k, v in self.terms.items():
            t = complex(v)
            for c, e in zip(coords, k):
                if e:
                    t *= c ** e
            total += t
        return total

    def substitute(self, images: Sequence["_SparsePoly"], target_cls=None):
        """Compose: replace variable j by images[j] (all of one class)."""
        if len(images) != self.n + 1:
            raise DimensionMismatch("need one image per variable")
        cls = target_cls or type(images[0])
        m = images[0].n
        powers: list[list] = [[cls.constant(m, 1)] for _ in images]
        out = cls.zero(m)
        acc: dict[Key, QQi] = {}
        for k, v in self.terms.items():
            t = cls.constant(m, v)
            for j, e in enumerate(k):
                if e:
                    pw = powers[j]
                    while len(pw) <= e:
                        pw.append(pw[-1] * images[j])
                    t = t * pw[e]
            for kk, vv in t.terms.items():
                acc[kk] = acc[kk] + vv if kk in acc else vv
        out.terms = _clean(acc)
        return out

    def conj_coefficients(self):
        return self._raw(self.n, {k: v.conj() for k, v in self.terms.items()})

    def max_coefficient_denominator(self) -> int:
        d = 1
        for v in self.terms.values():
            d = math.lcm(d, int(v.re.denominator), int(v.im.denominator))
        return d

    def __repr__(self):
        if not self.terms:
            return f"{type(self).__name__}(n={self.n}, 0)"
        parts = [f"({complex(v)}){list(k)}" for k, v in sorted(self.terms.items())]
        return f"{type(self).__name__}(n={self.n}, " + " + ".join(parts) + ")"


class ParabolicPolynomial(_SparsePoly):
    """Polynomial sum c_{alpha,m} zeta^alpha z^m; exponent keys are alpha + (m,)."""

    __slots__ = ()

    @classmethod
    def from_terms(cls, n: int, terms: Iterable[tuple[Sequence[int], int, object]]):
        """Build from (alpha, m, coefficient) triples."""
        d: dict = {}
        for alpha, m, c in terms:
            k = tuple(alpha) + (m,)
            d[k] = QQi.coerce(c) + d.get(k, ZERO)
        return cls(n, d)

    @classmethod
    def zeta(cls, n: int, j: int):
        return cls.variable(n, j)

    @classmethod
    def z(cls, n: int):
        return cls.variable(n, n)

    @staticmethod
    def key_degree(k: Key) -> int:
        return sum(k[:-1]) + 2 * k[-1]

    @staticmethod
    def zeta_degree(k: Key) -> int:
        return sum(k[:-1])

    def parabolic_degree(self) -> int:
        """Max of |alpha| + 2m over terms; -1 for the zero polynomial."""
        return max((self.key_degree(k) for k in self.terms), default=-1)

    def d2(self, k: int = 1):
        """k-th derivative in z."""
        return self.derivative(self.n, k) if k else self

    def evaluate_at(self, p) -> complex:
        return self.evaluate(p.zeta + (p.z,))

    def to_json(self) -> list[dict]:
        return [
            {"alpha": list(k[:-1]), "m": k[-1], "re": rat_str(v.re), "im": rat_str(v.im)}
            for k, v in sorted(self.terms.items())
        ]

    @classmethod
    def from_json(cls, n: int, data: list[dict]):
        return cls.from_terms(
            n, ((t["alpha"], t["m"], QQi(to_mpq(t["re"]), to_mpq(t["im"]))) for t in data)
        )


class BallPolynomial(_SparsePoly):
    """Polynomial in w = (w_1..w_{n+1}) on the ball, graded by ordinary degree."""

    __slots__ = ()

    def degree(self) -> int:
        return max((sum(k) for k in self.terms), default=-1)

    def homogeneous_parts(self) -> list[tuple[int, "BallPolynomial"]]:
        parts: dict[int, dict] = defaultdict(dict)
        for k, v in self.terms.items():
            parts[sum(k)][k] = v
        return [(d, self._raw(self.n, parts[d])) for d in sorted(parts)]

    def to_json(self) -> list[dict]:
        return [
            {"alpha": list(k), "re": rat_str(v.re), "im": rat_str(v.im)}
            for k, v in sorted(self.terms.items())
        ]

    @classmethod
    def from_json(cls, n: int, data: list[dict]):
        return cls(n, {tuple(t["alpha"]): QQi(to_mpq(t["re"]), to_mpq(t["im"])) for t in data})


def parabolic_monomials(n: int, max_degree: int) -> list[Key]:
    """All exponent keys alpha + (m,) with |alpha| + 2m <= max_degree."""
    out = []
    for m in range(max_degree // 2 + 1):
        for alpha in multi_indices(n, max_degree - 2 * m, exact=False):
            out.append(alpha + (m,))
    return sorted(out, key=lambda k: (ParabolicPolynomial.key_degree(k), k))


def multi_indices(n: int, degree: int, exact: bool = True) -> list[tuple[int, ...]]:
    """Multi-indices of length n with |alpha| == degree (or <= degree)."""
    if n == 0:
        return [()] if (degree == 0 or not exact) else []
    out = []
    lo = degree if exact else 0
    for total in range(lo, degree + 1):
        out.extend(_compositions(n, total))
    return out


def _compositions(n: int, total: int):
    if n == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(n - 1, total - first):
            yield (first,) + rest
