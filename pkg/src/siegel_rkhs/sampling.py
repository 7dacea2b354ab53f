"""Seeded random points, unitaries and group words for the verification suites."""
from __future__ import annotations

import numpy as np

from .geometry import BallPoint, SiegelPoint, norm2
from .groups import INV, INV_INVERSE, AffineAutomorphism, GroupWord
from .rng import SplitMix64


def random_unitary(rng: SplitMix64, n: int) -> np.ndarray:
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    X = np.array([[rng.complex_normal() for _ in range(n)] for _ in range(n)])
    Q, R = np.linalg.qr(X)
    d = np.diag(R)
    return Q * (d / np.abs(d))


def random_siegel_point(rng: SplitMix64, n: int, rho_range=(0.1, 10.0)) -> SiegelPoint:
    zeta = tuple(rng.complex_normal() for _ in range(n))
    r = rng.log_uniform(*rho_range)
    return SiegelPoint(zeta, complex(rng.uniform(-3.0, 3.0), r + norm2(zeta)))


def random_ball_point(rng: SplitMix64, n: int, max_radius: float = 0.95) -> BallPoint:
    v = np.array([rng.complex_normal() for _ in range(n + 1)])
    v *= max_radius * rng.random() ** (1.0 / (2 * n + 2)) / np.linalg.norm(v)
    return BallPoint(tuple(v))


def random_affine(rng: SplitMix64, n: int) -> AffineAutomorphism:
    zeta0 = [rng.complex_normal() for _ in range(n)]
    return AffineAutomorphism(zeta0, rng.uniform(-2.0, 2.0), rng.log_uniform(0.5, 2.0),
                              random_unitary(rng, n))


def random_word(rng: SplitMix64, n: int, max_letters: int = 4) -> GroupWord:
    """1..max_letters letters; about a third are inversions (INV or its inverse)."""
    letters = []
    for _ in range(rng.integers(1, max_letters + 1)):
        u = rng.random()
        if u < 0.25:
            letters.append(INV)
        elif u < 0.35:
            letters.append(INV_INVERSE)
        else:
            letters.append(random_affine(rng, n))
    return GroupWord(letters)
