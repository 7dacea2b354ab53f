"""Exact Gaussian rationals a + b i with a, b arbitrary-precision rationals."""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from gmpy2 import mpq

from .errors import ExactnessError


def to_mpq(x) -> mpq:
    """Convert an int, Fraction, mpq, "p/q" string or float (exactly) to mpq."""
    if isinstance(x, str):
        return mpq(Fraction(x))
    if isinstance(x, float):
        return mpq(Fraction(x))
    if isinstance(x, (int, Rational)) or type(x).__name__ == "mpq":
        return mpq(x)
    raise ExactnessError(f"cannot convert {x!r} to an exact rational")


class QQi:
    """Element of Q(i).  Immutable by convention."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is type(_ZERO) else to_mpq(re)
        self.im = im if type(im) is type(_ZERO) else to_mpq(im)

    @classmethod
    def coerce(cls, x) -> "QQi":
        if isinstance(x, QQi):
            return x
        if isinstance(x, complex):
            return cls(x.real, x.imag)
        return cls(x, 0)

    def __add__(self, o):
        o = QQi.coerce(o)
        return QQi(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = QQi.coerce(o)
        return QQi(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return QQi.coerce(o) - self

    def __neg__(self):
        return QQi(-self.re, -self.im)

    def __mul__(self, o):
        if not isinstance(o, QQi):
            o = QQi.coerce(o)
        a, b, c, d = self.re, self.im, o.re, o.im
        return QQi(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def conj(self) -> "QQi":
        return QQi(self.re, -self.im)

    def abs2(self) -> mpq:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "QQi":
        n = self.abs2()
        if n == 0:
            raise ZeroDivisionError("inverse of 0 in Q(i)")
        return QQi(self.re / n, -self.im / n)

    def __truediv__(self, o):
        return self * QQi.coerce(o).inverse()

    def __rtruediv__(self, o):
        return QQi.coerce(o) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, o):
        try:
            o = QQi.coerce(o)
        except ExactnessError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"QQi({self.re}, {self.im})"


_ZERO = mpq(0)
ZERO = QQi(0, 0)
ONE = QQi(1, 0)
I = QQi(0, 1)


def rat_str(x: mpq) -> str:
    """Render as "p/q" (or "p" when integral), the JSON coefficient format."""
    return str(x)


# ------------------------------------------------------------ linear algebra


class EchelonBasis:
    """Incremental row echelon form over Q(i) for sparse vectors (dicts).

    Each stored row has a pivot equal to its largest key (under ``order``)
    with coefficient 1, so reducing a vector only ever introduces smaller keys.
    """

    def __init__(self, order=None):
        self.order = order or (lambda k: k)
        self.rows: dict = {}

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec: dict) -> dict:
        v = {k: c for k, c in vec.items() if c}
        while True:
            hits = [k for k in v if k in self.rows]
            if not hits:
                return v
            k = max(hits, key=self.order)
            c = v[k]
            for kk, cc in self.rows[k].items():
                nv = v.get(kk, ZERO) - c * cc
                if nv:
                    v[kk] = nv
                else:
                    v.pop(kk, None)

    def add(self, vec: dict) -> dict | None:
        """Insert ``vec``; return the new normalized row, or None if dependent."""
        v = self.reduce(vec)
        if not v:
            return None
        piv = max(v, key=self.order)
        inv = v[piv].inverse()
        row = {k: c * inv for k, c in v.items()}
        self.rows[piv] = row
        return row

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)


def rank(vectors) -> int:
    basis = EchelonBasis()
    for v in vectors:
        basis.add(v)
    return len(basis)


def nullspace(matrix: list[list[QQi]]) -> list[list[QQi]]:
    """Basis of {x : matrix @ x = 0} for a dense Q(i) matrix (rows x cols)."""
    if not matrix:
        return []
    A = [list(r) for r in matrix]
    rows, cols = len(A), len(A[0])
    pivots = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if A[i][c]), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = A[r][c].inverse()
        A[r] = [x * inv for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        x = [ZERO] * cols
        x[fc] = ONE
        for i, pc in enumerate(pivots):
            x[pc] = -A[i][fc]
        basis.append(x)
    return basis
