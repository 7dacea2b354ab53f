"""The single phase convention shared by group actions, kernels and transfers.

Complex powers use the principal logarithm.  Two constants need a fixed
choice on top of that:

* (2i)^a := 2^a exp(i pi a / 2), used by the Cayley transfer factors;
* i^{-n s/(n+2)} := exp(-i pi n s / (2(n+2))), the constant in the weight of
  the inversion.

``iota_offset`` multiplies the inversion weight by exp(i * iota_offset).  It
is zero in the reference convention and exists only so that negative
controls can run with a deliberately wrong phase.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass


@dataclass(frozen=True)
class PhaseConvention:
    iota_offset: float = 0.0

    def two_i_power(self, a: float) -> complex:
        return 2.0 ** a * cmath.exp(0.5j * math.pi * a)

    def iota_constant(self, n: int, s: float) -> complex:
        return cmath.exp(-0.5j * math.pi * n * s / (n + 2) + 1j * self.iota_offset)

    def perturbed(self, radians: float) -> "PhaseConvention":
        return PhaseConvention(self.iota_offset + radians)


DEFAULT = PhaseConvention()


def principal_power(x: complex, a: float) -> complex:
    """x**a on the principal branch; x must not be 0."""
    if x == 0:
        raise ZeroDivisionError("0 raised to a complex power")
    return cmath.exp(a * cmath.log(x))
