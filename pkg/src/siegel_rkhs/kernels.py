"""Kernels B^s, K_s and the ball kernel; Gram matrices and positivity scans.

base(p, q) = (z - conj(z'))/(2i) - <zeta|zeta'> has positive real part on
interior pairs, so every power below is the principal one.
"""
from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .cayley import ball_factor
from .convention import DEFAULT, PhaseConvention, principal_power
from .errors import DimensionMismatch, DomainError, IllConditioned, ParameterError, PositivityViolation
from .geometry import BallPoint, SiegelPoint, cayley, hdot, norm2
from .groups import apply_point, as_word, cocycle_word
from .linalg import hermitian_eigvalsh
from .rng import SplitMix64, derive_seed

PSD_RTOL = 1e-10
WITNESS_THRESHOLD = -1e-6


def base(p: SiegelPoint, q: SiegelPoint) -> complex:
    if p.n != q.n:
        raise DimensionMismatch("points of different dimension")
    b = (p.z - q.z.conjugate()) / 2j - hdot(p.zeta, q.zeta)
    if not b.real > 0 and not (p.boundary or q.boundary):
        raise PositivityViolation(f"Re base = {b.real} <= 0")
    return b


def eval_B(s: float, p: SiegelPoint, q: SiegelPoint) -> complex:
    if s == 0:
        base(p, q)
        return 1.0 + 0j
    return principal_power(base(p, q), s)


def bergman_constant(s: float, n: int) -> float:
    """c_s = (2s)(2s+1)...(2s+n) / (4 pi^{n+1})."""
    return math.prod(2 * s + j for j in range(n + 1)) / (4 * math.pi ** (n + 1))


def eval_K(s: float, p: SiegelPoint, q: SiegelPoint) -> complex:
    if not s > 0:
        raise ParameterError("the weighted Bergman kernel needs s > 0")
    return bergman_constant(s, p.n) * eval_B(-(p.n + 1 + 2 * s), p, q)


def eval_ball(s: float, w: BallPoint, w2: BallPoint) -> complex:
    if w.n != w2.n:
        raise DimensionMismatch("points of different dimension")
    if not (norm2(w.w) < 1 and norm2(w2.w) < 1):
        raise DomainError("points must lie in the open ball")
    return 2.0 ** (2 * s / (w.n + 2)) * principal_power(1 - hdot(w.w, w2.w), -s)


# ------------------------------------------------------------------- Gram


class KernelKind(enum.Enum):
    B_POWER = "B_POWER"        # B^{-s}(p, q) = base(p, q)^{-s}
    BERGMAN_K = "BERGMAN_K"    # K_s
    BALL_POWER = "BALL_POWER"  # 2^{2s/(n+2)} (1 - <w|w'>)^{-s}


@dataclass(frozen=True)
class KernelSpec:
    kind: KernelKind
    s: float
    n: int

    def __post_init__(self):
        if self.kind is KernelKind.BERGMAN_K and not self.s > 0:
            raise ParameterError("BERGMAN_K requires s > 0")

    def __call__(self, p, q) -> complex:
        if self.kind is KernelKind.B_POWER:
            return eval_B(-self.s, p, q)
        if self.kind is KernelKind.BERGMAN_K:
            return eval_K(self.s, p, q)
        return eval_ball(self.s, p, q)


@dataclass
class GramReport:
    s: float
    points: list
    matrix: np.ndarray
    min_eigenvalue: float
    psd: bool
    norm: float


def psd_threshold(G: np.ndarray) -> float:
    return -PSD_RTOL * max(1.0, float(np.max(np.sum(np.abs(G), axis=-1))))


def gram_matrix(spec: KernelSpec, points: Sequence) -> np.ndarray:
    if not points:
        raise ParameterError("need at least one point")
    N = len(points)
    G = np.empty((N, N), dtype=complex)
    for j in range(N):
        for k in range(j, N):
            v = spec(points[j], points[k])
            G[j, k] = v
            G[k, j] = v.conjugate()
        G[j, j] = G[j, j].real
    return G


def gram(spec: KernelSpec, points: Sequence) -> GramReport:
    G = gram_matrix(spec, points)
    lam = float(hermitian_eigvalsh(G)[0])
    return GramReport(spec.s, list(points), G, lam, lam >= psd_threshold(G),
                      float(np.max(np.sum(np.abs(G), axis=1))))


# ----------------------------------------------------------- Wallach scan


ANCHOR = (complex(0, 1), complex(0, 2))


def random_cloud(rng: SplitMix64, n: int, size: int, anchor: bool = False) -> list[SiegelPoint]:
    """log-uniform rho in [1e-2, 1e2], Gaussian zeta, Re z uniform in [-5, 5]."""
    pts = [SiegelPoint((0j,) * n, z) for z in ANCHOR] if anchor else []
    while len(pts) < size:
        zeta = tuple(rng.complex_normal() for _ in range(n))
        r = rng.log_uniform(1e-2, 1e2)
        x = rng.uniform(-5.0, 5.0)
        pts.append(SiegelPoint(zeta, complex(x, r + norm2(zeta))))
    return pts[:size]


def _base_matrices(clouds: list[list[SiegelPoint]]) -> np.ndarray:
    Z = np.array([[p.z for p in c] for c in clouds])
    B = (Z[:, :, None] - np.conj(Z[:, None, :])) / 2j
    n = clouds[0][0].n
    if n:
        X = np.array([[p.zeta for p in c] for c in clouds])
        B = B - np.einsum("tjl,tkl->tjk", X, np.conj(X))
    return B


@dataclass
class WallachEntry:
    s: float
    min_eig: float
    psd: bool
    witness_trial: int
    witness: list = field(default_factory=list)
    witness_min_eig: float = 0.0

    @property
    def witness_id(self) -> str:
        return f"s={self.s!r}/trial={self.witness_trial}"

    @property
    def has_negative_witness(self) -> bool:
        return self.min_eig < WITNESS_THRESHOLD


def thread_cap() -> int:
    env = os.environ.get("SIEGEL_RKHS_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return max(1, os.cpu_count() or 1)


def wallach_scan(n: int, s_grid: Sequence[float], trials: int = 200, cloud_size: int = 12,
                 seed: int = 42, threads: int | None = None) -> list[WallachEntry]:
    """For each s, the worst min eigenvalue of Gram(B^{-s}) over seeded clouds.

    Clouds depend on (seed, n, trial) only, so every s sees the same clouds.
    Trial 0 always contains the anchor pair (0, i), (0, 2i).
    """
    if not 2 <= cloud_size <= 16:
        raise ParameterError("cloud_size must lie in [2, 16]")
    if trials < 1:
        raise ParameterError("trials must be >= 1")
    clouds = [random_cloud(SplitMix64(derive_seed(seed, n, t)), n, cloud_size, anchor=(t == 0))
              for t in range(trials)]
    B = _base_matrices(clouds)
    logB = np.log(B)

    def task(s):
        G = np.exp(-s * logB) if s != 0 else np.ones_like(B)
        G = 0.5 * (G + np.conj(np.swapaxes(G, -1, -2)))
        lam = hermitian_eigvalsh(G)[:, 0]
        norms = np.max(np.sum(np.abs(G), axis=-1), axis=-1)
        ok = lam >= -PSD_RTOL * np.maximum(1.0, norms)
        t = int(np.argmin(lam))
        return WallachEntry(float(s), float(lam[t]), bool(np.all(ok)), t, clouds[t], float(lam[t]))

    workers = min(threads or thread_cap(), len(s_grid)) or 1
    if workers == 1:
        return [task(s) for s in s_grid]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(task, s_grid))


def wallach_passed(entries: Sequence[WallachEntry]) -> bool:
    return all(e.psd if e.s >= 0 else e.has_negative_witness for e in entries)


# ------------------------------------------------------ invariance checks


@dataclass
class IdentityReport:
    identity: str
    params: dict
    max_error: float
    passed: bool
    witness: dict | None = None


def verify_kernel_invariance(w, s: float, pairs: Sequence[tuple[SiegelPoint, SiegelPoint]],
                             tol: float = 1e-9, convention: PhaseConvention = DEFAULT,
                             conj_convention: PhaseConvention | None = None) -> IdentityReport:
    """B^{-s}(w^{-1}p, w^{-1}q) c(p) conj(c(q)) = B^{-s}(p, q), c = cocycle of w^{-1}.

    ``conj_convention`` evaluates the antiholomorphic factor; it defaults to
    ``convention``.  Passing a different one models two modules that disagree
    on the phase of the inversion.
    """
    conj_convention = conj_convention or convention
    wi = as_word(w).inverse()
    worst, where = 0.0, None
    for idx, (p, q) in enumerate(pairs):
        lhs = (eval_B(-s, apply_point(wi, p), apply_point(wi, q))
               * cocycle_word(wi, s, p, convention)
               * cocycle_word(wi, s, q, conj_convention).conjugate())
        rhs = eval_B(-s, p, q)
        err = abs(lhs - rhs) / abs(rhs)
        if err > worst or where is None:
            worst, where = max(worst, err), idx
    return IdentityReport("kernel_invariance", {"s": s, "letters": len(wi)}, worst, worst <= tol,
                          {"pair": where})


def cayley_transfer_kernel_check(s: float, pairs: Sequence[tuple[BallPoint, BallPoint]],
                                 tol: float = 1e-10,
                                 convention: PhaseConvention = DEFAULT) -> IdentityReport:
    worst, where = 0.0, None
    for idx, (w, w2) in enumerate(pairs):
        lhs = (eval_B(-s, cayley(w), cayley(w2)) * ball_factor(s, w, convention)
               * ball_factor(s, w2, convention).conjugate())
        rhs = eval_ball(s, w, w2)
        err = abs(lhs - rhs) / abs(rhs)
        if err > worst or where is None:
            worst, where = max(worst, err), idx
    return IdentityReport("cayley_kernel_transfer", {"s": s}, worst, worst <= tol, {"pair": where})


def reproducing_check(s: float, nodes: Sequence[SiegelPoint], target: SiegelPoint,
                      coefficients: Sequence[complex] | None = None) -> float:
    """Relative gap between f(target) and <f | P K_target> for f in span K_s(., q_j).

    P is the orthogonal projection onto the span, computed from the Gram
    matrix G_{jk} = K_s(q_j, q_k).
    """
    spec = KernelSpec(KernelKind.BERGMAN_K, s, target.n)
    G = gram_matrix(spec, nodes)
    lam = hermitian_eigvalsh(G)
    if not lam[0] > 0 or lam[-1] / lam[0] > 1e12:
        raise IllConditioned("Gram matrix of the nodes is (nearly) singular")
    a = np.ones(len(nodes), dtype=complex) if coefficients is None else np.asarray(coefficients, dtype=complex)
    kt = np.array([spec(q, target) for q in nodes])
    c = np.linalg.solve(G, kt)
    f_t = sum(aj * spec(target, q) for aj, q in zip(a, nodes))
    inner = np.conj(c) @ G @ a
    return float(abs(f_t - inner) / abs(f_t))
