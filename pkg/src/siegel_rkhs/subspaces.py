"""Invariant subspaces of polynomials under the affine group.

A descriptor (h_0, h_1, ...) stands for the closed span of
P_k(C^n) (x) P^{h_k}(C), k = 0, 1, ..., where P_k(C^n) are the homogeneous
polynomials of degree k in zeta and P^h(C) the polynomials in z of degree < h.
It is valid when h_{k+1} is h_k or (h_k - 1)_+ for every k.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .errors import BudgetExceeded, DimensionMismatch, InvariantViolation, ParameterError
from .exact import ONE, ZERO, EchelonBasis, QQi, nullspace, rank
from .groups import ExactAffine, act_U_poly
from .polynomials import BallPolynomial, ParabolicPolynomial, multi_indices
from .rng import SplitMix64

MAX_ENUM_DEGREE = 8
MAX_ORBIT_DEGREE = 10
MAX_ORBIT_DIM = 2000


def homogeneous_parts(P: ParabolicPolynomial) -> list[tuple[int, ParabolicPolynomial]]:
    parts: dict[int, dict] = {}
    for k, v in P.terms.items():
        parts.setdefault(ParabolicPolynomial.key_degree(k), {})[k] = v
    return [(d, ParabolicPolynomial._raw(P.n, parts[d])) for d in sorted(parts)]


def pi_k(P: ParabolicPolynomial, k: int) -> ParabolicPolynomial:
    """Terms of total zeta-degree k."""
    return ParabolicPolynomial._raw(
        P.n, {key: v for key, v in P.terms.items() if sum(key[:-1]) == k}
    )


# ------------------------------------------------------------ descriptors


@dataclass(frozen=True)
class SubspaceDescriptor:
    head: tuple[int, ...] = ()
    tail: int = 0

    def __post_init__(self):
        object.__setattr__(self, "head", tuple(int(h) for h in self.head))
        if min(self.head + (self.tail,)) < 0:
            raise ParameterError("descriptor entries are natural numbers")

    @classmethod
    def constant(cls, h: int) -> "SubspaceDescriptor":
        return cls((), h)

    def h(self, k: int) -> int:
        return self.head[k] if k < len(self.head) else self.tail

    def canonical(self) -> "SubspaceDescriptor":
        head = list(self.head)
        while head and head[-1] == self.tail:
            head.pop()
        return SubspaceDescriptor(tuple(head), self.tail)

    def sequence(self, length: int) -> tuple[int, ...]:
        return tuple(self.h(k) for k in range(length))

    def to_json(self) -> dict:
        return {"head": list(self.head), "tail": self.tail}

    @classmethod
    def from_json(cls, d: dict) -> "SubspaceDescriptor":
        return cls(tuple(d["head"]), d["tail"])

    def sort_key(self):
        c = self.canonical()
        L = len(c.head) + 1
        return c.sequence(L) + (c.tail,)

    def __str__(self):
        return "(" + ",".join(str(h) for h in self.head + (self.tail,)) + ",...)"


def validate_descriptor(d: SubspaceDescriptor) -> tuple[bool, int | None]:
    """Step rule h_{k+1} in {h_k, (h_k - 1)_+}; returns (ok, first bad k)."""
    seq = d.head + (d.tail,)
    for k in range(len(seq) - 1):
        a, b = seq[k], seq[k + 1]
        if b != a and b != max(a - 1, 0):
            return False, k
    return True, None


def member(P: ParabolicPolynomial, d: SubspaceDescriptor) -> bool:
    return all(key[-1] < d.h(sum(key[:-1])) for key in P.terms)


def orbit_descriptor(k: int, h: int) -> SubspaceDescriptor:
    """Descriptor of the invariant span of P_k(C^n) (x) P^h(C)."""
    head = tuple(h if l <= k else max(h - (l - k), 0) for l in range(k + h + 1))
    return SubspaceDescriptor(head, 0).canonical()


# ------------------------------------------------------------ generators


def _unit(n, j, c):
    v = [ZERO] * n
    v[j] = QQi.coerce(c)
    return v


def signed_permutations(n: int) -> list[list[list[QQi]]]:
    """A small generating family: one transposition and one sign flip."""
    out = []
    if n >= 2:
        P = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
        P[0][0], P[0][1], P[1][0], P[1][1] = ZERO, ONE, ONE, ZERO
        out.append(P)
    if n >= 1:
        S = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
        S[0][0] = -ONE
        out.append(S)
    return out


def generator_set(n: int) -> list[ExactAffine]:
    """Exact generators: Heisenberg moves, dilations R = 2, 1/2, signed permutations."""
    half = QQi(0, "1/2")
    gens = [ExactAffine([0] * n, 1)]
    for j in range(n):
        for c in (ONE, QQi("-1/2"), half):
            gens.append(ExactAffine(_unit(n, j, c), 0))
    if n >= 2:
        gens.append(ExactAffine([ONE] + [half] * (n - 1), -1))
    gens.append(ExactAffine([0] * n, 0, 2))
    gens.append(ExactAffine([0] * n, 0, "1/2"))
    for U in signed_permutations(n):
        gens.append(ExactAffine([0] * n, 0, 1, U))
    return gens


_HEIS_VALUES = (ZERO, ONE, -ONE, QQi("1/2"), QQi("-1/2"), QQi(0, "1/2"), QQi(0, "-1/2"))


def random_exact_affine(rng: SplitMix64, n: int, letters: int = 3) -> ExactAffine:
    """Composition of random letters with parameters from the exact sample."""
    a = ExactAffine.identity(n)
    perms = _all_signed_permutations(n)
    for _ in range(letters):
        zeta0 = [rng.choice(_HEIS_VALUES) for _ in range(n)]
        x0 = rng.choice((0, 1, -1))
        R = rng.choice((1, 2, "1/2"))
        U = perms[rng.integers(0, len(perms))]
        a = a.compose(ExactAffine(zeta0, x0, R, U))
    return a


def _all_signed_permutations(n: int):
    from itertools import permutations

    out = []
    for perm in permutations(range(n)):
        for signs in product((1, -1), repeat=n):
            out.append([[QQi(signs[i]) if perm[i] == j else ZERO for j in range(n)] for i in range(n)])
    return out


# ------------------------------------------------------------ orbit spans


def _order(key):
    return (ParabolicPolynomial.key_degree(key), key)


def _truncate(P: ParabolicPolynomial, degree_bound: int) -> ParabolicPolynomial:
    return ParabolicPolynomial._raw(
        P.n, {k: v for k, v in P.terms.items() if ParabolicPolynomial.key_degree(k) <= degree_bound}
    )


def orbit_span(seeds: Iterable[ParabolicPolynomial], generators: Sequence[ExactAffine],
               degree_bound: int, max_dim: int = MAX_ORBIT_DIM) -> list[ParabolicPolynomial]:
    """Smallest subspace containing the seeds and closed under the generators."""
    seeds = list(seeds)
    n = seeds[0].n if seeds else 0
    basis = EchelonBasis(_order)
    queue = []
    for P in seeds:
        row = basis.add(_truncate(P, degree_bound).terms)
        if row is not None:
            queue.append(row)
    while queue:
        row = queue.pop()
        P = ParabolicPolynomial._raw(n, dict(row))
        for g in generators:
            img = _truncate(act_U_poly(g, 0, P), degree_bound)
            new = basis.add(img.terms)
            if new is not None:
                if len(basis) > max_dim:
                    raise BudgetExceeded(f"orbit span exceeds {max_dim} dimensions")
                queue.append(new)
    return [ParabolicPolynomial._raw(n, dict(r)) for _, r in sorted(basis.rows.items(), key=lambda kv: _order(kv[0]))]


def brute_force_orbit_span(n: int, k: int, h: int, degree_bound: int = MAX_ORBIT_DEGREE,
                           generators: Sequence[ExactAffine] | None = None) -> list[ParabolicPolynomial]:
    """Closure of {zeta^alpha z^m : |alpha| = k, m < h} under the generators."""
    if degree_bound > MAX_ORBIT_DEGREE and n <= 2:
        raise BudgetExceeded(f"degree_bound {degree_bound} > {MAX_ORBIT_DEGREE}")
    gens = generator_set(n) if generators is None else list(generators)
    seeds = [ParabolicPolynomial.monomial(n, alpha + (m,)) for alpha in multi_indices(n, k) for m in range(h)]
    if not seeds:
        return []
    return orbit_span(seeds, gens, degree_bound)


def member_set(n: int, d: SubspaceDescriptor, degree_bound: int) -> list[tuple[int, ...]]:
    """Monomial keys of the descriptor space with parabolic degree <= degree_bound."""
    out = []
    for l in range(degree_bound + 1):
        for alpha in multi_indices(n, l):
            for m in range(d.h(l)):
                if l + 2 * m <= degree_bound:
                    out.append(alpha + (m,))
    return out


def span_matches_descriptor(basis: Sequence[ParabolicPolynomial], n: int,
                            d: SubspaceDescriptor, degree_bound: int) -> bool:
    """True iff span(basis) equals the truncated descriptor space exactly."""
    if not all(member(P, d) for P in basis):
        return False
    return len(basis) == len(member_set(n, d, degree_bound))


# ------------------------------------------------------------ enumeration


def _blocks(n: int, D: int) -> list[tuple[int, int]]:
    """(zeta-degree l, z-degree m) pairs with l + m < D; only l = 0 when n = 0."""
    lmax = D - 1 if n else 0
    return [(l, m) for l in range(lmax + 1) for m in range(D - l)]


def footprint(n: int, d: SubspaceDescriptor, D: int) -> frozenset:
    return frozenset((l, m) for l, m in _blocks(n, D) if m < d.h(l))


def _valid_sequences(D: int):
    def rec(prefix):
        if len(prefix) == D:
            yield tuple(prefix)
            return
        last = prefix[-1]
        for nxt in sorted({last, max(last - 1, 0)}):
            yield from rec(prefix + [nxt])

    for h0 in range(D + 1):
        yield from rec([h0])


def candidate_descriptors(n: int, D: int) -> dict[frozenset, SubspaceDescriptor]:
    """One canonical valid descriptor per distinct truncation below degree D."""
    if D == 0:
        return {frozenset(): SubspaceDescriptor()}
    best: dict[frozenset, SubspaceDescriptor] = {}
    for seq in _valid_sequences(D):
        d = SubspaceDescriptor(seq, seq[-1]).canonical()
        fp = footprint(n, d, D)
        cur = best.get(fp)
        if cur is None or (len(d.head), d.head, d.tail) < (len(cur.head), cur.head, cur.tail):
            best[fp] = d
    return best


def _block_monomials(n: int, block):
    l, m = block
    return [ParabolicPolynomial.monomial(n, alpha + (m,)) for alpha in multi_indices(n, l)]


def block_reach(n: int, D: int, generators: Sequence[ExactAffine]) -> dict:
    """For each block, the set of blocks reachable by repeated generator action."""
    blocks = _blocks(n, D)
    step: dict = {}
    for b in blocks:
        hit = set()
        for P in _block_monomials(n, b):
            for g in generators:
                for key in act_U_poly(g, 0, P).terms:
                    c = (sum(key[:-1]), key[-1])
                    if c[0] + c[1] >= D:
                        raise InvariantViolation("generator raised the ordinary degree")
                    hit.add(c)
        step[b] = hit
    reach = {}
    for b in blocks:
        seen, stack = {b}, [b]
        while stack:
            for c in step[stack.pop()]:
                if c not in seen:
                    seen.add(c)
                    stack.append(c)
        reach[b] = frozenset(seen)
    return reach


def invariant_block_sets(n: int, D: int, generators: Sequence[ExactAffine] | None = None) -> set:
    """All sums of blocks P_l(C^n) (x) z^m (l + m < D) closed under the generators."""
    gens = generator_set(n) if generators is None else list(generators)
    reach = block_reach(n, D, gens)
    closed = {frozenset()}
    for b in _blocks(n, D):
        closed |= {c | reach[b] for c in closed}
    return closed


def enumerate_invariant_truncations(n: int, degree_bound: int) -> list[SubspaceDescriptor]:
    """Invariant subspaces truncated to ordinary degree < degree_bound.

    The descriptor side lists one valid descriptor per distinct truncation.
    The brute-force side finds every sum of blocks P_l (x) z^m closed under
    the generator sample.  The two lists must coincide, and every descriptor
    truncation is checked to be closed under act_U_poly.
    """
    if degree_bound > MAX_ENUM_DEGREE:
        raise BudgetExceeded(f"degree_bound {degree_bound} > {MAX_ENUM_DEGREE}")
    if degree_bound < 0:
        raise ParameterError("degree_bound must be >= 0")
    cands = candidate_descriptors(n, degree_bound)
    gens = generator_set(n)
    for d in cands.values():
        if not truncation_is_invariant(n, d, degree_bound, gens):
            raise InvariantViolation(f"descriptor {d} is not invariant")
    brute = invariant_block_sets(n, degree_bound, gens)
    if brute != set(cands):
        extra = brute - set(cands)
        raise InvariantViolation(f"block sets without a descriptor: {sorted(map(sorted, extra))}")
    return sorted(cands.values(), key=SubspaceDescriptor.sort_key)


def truncation_is_invariant(n: int, d: SubspaceDescriptor, D: int,
                            generators: Sequence[ExactAffine]) -> bool:
    return find_escape(n, d, D, generators) is None


def find_escape(n: int, d: SubspaceDescriptor, D: int,
                generators: Sequence[ExactAffine] | None = None):
    """A pair (a, P) with P in the truncated space and U(a)P outside it, or None."""
    gens = generator_set(n) if generators is None else generators
    for l, m in sorted(footprint(n, d, D)):
        for P in _block_monomials(n, (l, m)):
            for g in gens:
                if not member(act_U_poly(g, 0, P), d):
                    return g, P
    return None


def unitary_irreducibility_rank(n: int, k: int, samples: int = 0, seed: int = 0) -> int:
    """Rank of {(U zeta)_1^k : U unitary} inside P_k(C^n), numerically.

    Equal to dim P_k(C^n) exactly when the U(n)-orbit of zeta_1^k spans P_k.
    """
    if n == 0:
        return 1 if k == 0 else 0
    monos = multi_indices(n, k)
    samples = samples or 3 * len(monos) + 3
    rng = SplitMix64(seed)
    rows = []
    for _ in range(samples):
        X = np.array([[rng.complex_normal() for _ in range(n)] for _ in range(n)])
        Q, _ = np.linalg.qr(X)
        u = Q[0]
        # coefficient of zeta^alpha in (u . zeta)^k is multinomial(k; alpha) u^alpha
        rows.append([math.factorial(k) / math.prod(math.factorial(a) for a in alpha)
                     * np.prod([u[j] ** alpha[j] for j in range(n)]) for alpha in monos])
    return int(np.linalg.matrix_rank(np.array(rows)))


# ------------------------------------------------------------ annihilators


@dataclass(frozen=True)
class AnnihilatorOperator:
    """coeff * d_zeta^alpha d_conj(zeta)^beta d_x^m at the origin of the group."""

    alpha: tuple[int, ...]
    beta: tuple[int, ...]
    m: int
    coeff: QQi = ONE

    @property
    def degree(self) -> int:
        return sum(self.alpha) + sum(self.beta) + 2 * self.m

    @property
    def weight(self) -> int:
        return math.prod(math.factorial(a) for a in self.alpha + self.beta) * math.factorial(self.m)


def _pullback(P: ParabolicPolynomial, g) -> BallPolynomial:
    """P(g . (zeta', x' + i|zeta'|^2)) in the 2n+1 variables (zeta', conj zeta', x')."""
    n = P.n
    gz, gzz = g
    V = 2 * n
    var = lambda j: BallPolynomial.variable(V, j)
    const = lambda c: BallPolynomial.constant(V, c)
    images = [const(gz[j]) + var(j) for j in range(n)]
    zimg = const(gzz) + var(2 * n)
    for j in range(n):
        zimg = zimg + (var(j) * var(n + j)).scale(QQi(0, 1))
        if gz[j]:
            zimg = zimg + var(j).scale(QQi(0, 2) * gz[j].conj())
    images.append(zimg)
    return P.substitute(images, BallPolynomial)


def heisenberg_base_point(zeta, x) -> tuple[tuple[QQi, ...], QQi]:
    """Exact boundary point (zeta, x + i|zeta|^2) of the Heisenberg element (zeta, x)."""
    zeta = tuple(QQi.coerce(c) for c in zeta)
    return zeta, QQi(QQi.coerce(x).re, sum((c.abs2() for c in zeta), QQi(0).re))


def annihilation_pair(P: ParabolicPolynomial, op, at) -> list[QQi]:
    """(P * op)(g) for each Heisenberg point g = (zeta, x) in ``at``.

    ``op`` is an AnnihilatorOperator or a list of them (a sum).
    """
    ops = [op] if isinstance(op, AnnihilatorOperator) else list(op)
    out = []
    for zeta, x in at:
        if len(zeta) != P.n:
            raise DimensionMismatch("base point and polynomial dimensions differ")
        F = _pullback(P, heisenberg_base_point(zeta, x))
        total = ZERO
        for o in ops:
            key = tuple(o.alpha) + tuple(o.beta) + (o.m,)
            c = F.terms.get(key)
            if c:
                total = total + c * o.coeff * o.weight
        out.append(total)
    return out


def operator_monomials(n: int, degree: int) -> list[AnnihilatorOperator]:
    out = []
    for m in range(degree // 2 + 1):
        rest = degree - 2 * m
        for a_deg in range(rest + 1):
            for alpha in multi_indices(n, a_deg):
                for beta in multi_indices(n, rest - a_deg):
                    out.append(AnnihilatorOperator(alpha, beta, m))
    return out


def parabolic_monomials_of_degree(n: int, degree: int) -> list[tuple[int, ...]]:
    return [alpha + (m,) for m in range(degree // 2 + 1) for alpha in multi_indices(n, degree - 2 * m)]


def pairing_matrix(n: int, degree: int):
    """M[op][monomial] = <op, P(0 . (zeta', x' + i|zeta'|^2))> for degree-homogeneous data."""
    ops = operator_monomials(n, degree)
    monos = parabolic_monomials_of_degree(n, degree)
    origin = [((0,) * n, 0)]
    M = [[annihilation_pair(ParabolicPolynomial.monomial(n, key), o, origin)[0] for key in monos] for o in ops]
    return ops, monos, M


def annihilator_basis(n: int, d: SubspaceDescriptor, degree: int) -> list[list[AnnihilatorOperator]]:
    """Operators of the given degree killing every member of degree ``degree``.

    Returned modulo nothing: each entry is a linear combination (list of
    weighted monomial operators) in the null space of the pairing restricted
    to the member monomials.
    """
    ops, monos, M = pairing_matrix(n, degree)
    cols = [j for j, key in enumerate(monos) if key[-1] < d.h(sum(key[:-1]))]
    if not cols:
        return [[o] for o in ops]
    A = [[M[i][j] for i in range(len(ops))] for j in cols]  # rows: members, cols: ops
    out = []
    for x in nullspace(A):
        out.append([AnnihilatorOperator(o.alpha, o.beta, o.m, c) for o, c in zip(ops, x) if c])
    return out


@dataclass
class DualityRow:
    degree: int
    members: int
    annihilator: int
    total: int

    @property
    def ok(self) -> bool:
        return self.members + self.annihilator == self.total


def annihilator_duality(n: int, d: SubspaceDescriptor, degree_bound: int) -> list[DualityRow]:
    """Per degree k: dim V_k, dim Ann(V_k)/Ann(P_k) and dim P_k.

    Ann(P_k) is the kernel of the pairing on all homogeneous polynomials of
    degree k; the quotient is the part of the annihilator seen by P_k.
    """
    rows = []
    for k in range(degree_bound + 1):
        ops, monos, M = pairing_matrix(n, k)
        full = rank({j: M[i][j] for j in range(len(monos))} for i in range(len(ops)))
        member_cols = [j for j, key in enumerate(monos) if key[-1] < d.h(sum(key[:-1]))]
        restricted = rank({j: M[i][j] for j in member_cols} for i in range(len(ops)))
        ann_v = len(ops) - restricted
        ann_p = len(ops) - full
        rows.append(DualityRow(k, len(member_cols), ann_v - ann_p, len(monos)))
    return rows
