"""Points of the Siegel half-space U_{n+1} and of the unit ball B_{n+1}.

U_{n+1} = {(zeta, z) in C^n x C : Im z > |zeta|^2}.  The Cayley map
C(zeta, z) = (zeta/(1-z), i(1+z)/(1-z)) carries B_{n+1} onto U_{n+1}.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, DomainError

MAX_N = 8


def _as_tuple(v) -> tuple[complex, ...]:
    return tuple(complex(c) for c in v)


def hdot(a: Sequence[complex], b: Sequence[complex]) -> complex:
    """<a|b> = sum a_j conj(b_j), linear in the first slot."""
    if len(a) != len(b):
        raise DimensionMismatch(f"vectors of length {len(a)} and {len(b)}")
    return sum((x * y.conjugate() for x, y in zip(a, b)), 0j)


def norm2(a: Sequence[complex]) -> float:
    return sum((abs(x) ** 2 for x in a), 0.0)


@dataclass(frozen=True)
class SiegelPoint:
    zeta: tuple[complex, ...]
    z: complex
    boundary: bool = False

    def __post_init__(self):
        object.__setattr__(self, "zeta", _as_tuple(self.zeta))
        object.__setattr__(self, "z", complex(self.z))
        if len(self.zeta) > MAX_N:
            raise DimensionMismatch(f"n={len(self.zeta)} exceeds {MAX_N}")
        r = self.z.imag - norm2(self.zeta)
        if not self.boundary and not r > 0:
            raise DomainError(f"rho = {r} <= 0 for an interior point")

    @classmethod
    def heisenberg(cls, zeta: Sequence[complex], x: float) -> "SiegelPoint":
        """Boundary point (zeta, x + i|zeta|^2), i.e. the Heisenberg element (zeta, x)."""
        zeta = _as_tuple(zeta)
        return cls(zeta, complex(x, norm2(zeta)), boundary=True)

    @property
    def n(self) -> int:
        return len(self.zeta)

    def coords(self) -> np.ndarray:
        return np.array(self.zeta + (self.z,), dtype=complex)


@dataclass(frozen=True)
class BallPoint:
    w: tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(self, "w", _as_tuple(self.w))
        if not 1 <= len(self.w) <= MAX_N + 1:
            raise DimensionMismatch(f"ball point of length {len(self.w)}")
        if not norm2(self.w) < 1.0:
            raise DomainError("|w| >= 1")

    @property
    def n(self) -> int:
        return len(self.w) - 1

    @property
    def zeta(self) -> tuple[complex, ...]:
        return self.w[:-1]

    @property
    def z(self) -> complex:
        return self.w[-1]


def rho(p: SiegelPoint) -> float:
    return p.z.imag - norm2(p.zeta)


def cayley(p: BallPoint) -> SiegelPoint:
    z = p.z
    d = 1 - z
    return SiegelPoint(tuple(c / d for c in p.zeta), 1j * (1 + z) / d)


def cayley_inverse(p: SiegelPoint) -> BallPoint:
    if p.boundary or not rho(p) > 0:
        raise DomainError("Cayley inverse needs an interior point")
    d = p.z + 1j
    return BallPoint(tuple(2j * c / d for c in p.zeta) + ((p.z - 1j) / d,))


def rho_of_cayley(p: BallPoint) -> float:
    """(1 - |w|^2)/|1 - z|^2, the closed form of rho(cayley(w))."""
    return (1.0 - norm2(p.w)) / abs(1 - p.z) ** 2


def point_to_json(p: SiegelPoint | BallPoint) -> list[list[float]]:
    coords = p.w if isinstance(p, BallPoint) else p.zeta + (p.z,)
    return [[c.real, c.imag] for c in coords]


def point_from_json(data, ball: bool = False):
    coords = [complex(re, im) for re, im in data]
    if ball:
        return BallPoint(coords)
    return SiegelPoint(coords[:-1], coords[-1])
