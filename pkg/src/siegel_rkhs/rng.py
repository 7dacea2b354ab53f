"""Portable SplitMix64 generator.

The update is the reference one (Steele, Lea, Flood 2014):

    state += 0x9E3779B97F4A7C15
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    return z ^ (z >> 31)

all modulo 2**64.  Doubles take the top 53 bits.  Per-task streams are
seeded with ``derive_seed(seed, *indices)`` so results do not depend on the
order in which tasks run.
"""
from __future__ import annotations

import math

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def derive_seed(seed: int, *indices: int) -> int:
    """Hash a base seed and a tuple of task indices into a fresh seed."""
    h = _mix((seed + _GOLDEN) & _MASK)
    for i in indices:
        h = _mix((h ^ ((i + 1) * _GOLDEN)) & _MASK)
    return h


class SplitMix64:
    def __init__(self, seed: int = 0):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK
        return _mix(self.state)

    def random(self) -> float:
        """Uniform double in [0, 1)."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.random()

    def integers(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi)."""
        return lo + self.next_u64() % (hi - lo)

    def choice(self, seq):
        return seq[self.integers(0, len(seq))]

    def normal(self) -> float:
        # Box-Muller, one value per call to keep the stream layout simple
        u1 = 1.0 - self.random()
        u2 = self.random()
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)

    def complex_normal(self, scale: float = 1.0) -> complex:
        return complex(self.normal(), self.normal()) * (scale / math.sqrt(2.0))

    def log_uniform(self, lo: float, hi: float) -> float:
        return math.exp(self.uniform(math.log(lo), math.log(hi)))
