"""Weighted Cayley transfer between functions on U_{n+1} and on B_{n+1}.

    (C_s f)(w)      = f(C w) (2i)^{s/(n+2)} / (1 - w_z)^s
    (C_s^{-1} g)(p) = g(C^{-1} p) (2i)^{s(n+1)/(n+2)} / (z + i)^s

with principal branches ((1 - w_z) has positive real part on the ball and
z + i lies in the upper half-plane).  A group word psi on the half-space
stands for the ball automorphism C^{-1} psi C.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .convention import DEFAULT, PhaseConvention, principal_power
from .errors import DomainError
from .geometry import BallPoint, SiegelPoint, cayley, cayley_inverse, rho
from .groups import GroupWord, act_U, apply_point, as_word


def ball_factor(s: float, w: BallPoint, convention: PhaseConvention = DEFAULT) -> complex:
    return convention.two_i_power(s / (w.n + 2)) / principal_power(1 - w.z, s)


def halfspace_factor(s: float, p: SiegelPoint, convention: PhaseConvention = DEFAULT) -> complex:
    n = p.n
    return convention.two_i_power(s * (n + 1) / (n + 2)) / principal_power(p.z + 1j, s)


def transfer_to_ball(f: Callable[[SiegelPoint], complex], s: float, w: BallPoint,
                     convention: PhaseConvention = DEFAULT) -> complex:
    if w.z == 1:
        raise DomainError("last coordinate equals 1")
    return f(cayley(w)) * ball_factor(s, w, convention)


def transfer_to_halfspace(g: Callable[[BallPoint], complex], s: float, p: SiegelPoint,
                          convention: PhaseConvention = DEFAULT) -> complex:
    if p.boundary or not rho(p) > 0:
        raise DomainError("transfer needs an interior point")
    return g(cayley_inverse(p)) * halfspace_factor(s, p, convention)


def cayley_jacobian(w: BallPoint) -> complex:
    """Closed form J C(w) = 2i / (1 - z)^{n+2}."""
    return 2j / (1 - w.z) ** (w.n + 2)


def holomorphic_jacobian(F: Callable[[np.ndarray], np.ndarray], w: np.ndarray,
                         radius: float, nodes: int = 32) -> complex:
    """det of the complex Jacobian of a holomorphic map C^N -> C^N.

    Each column is a Cauchy-circle derivative along one coordinate axis.
    """
    w = np.asarray(w, dtype=complex)
    N = w.shape[0]
    theta = 2 * np.pi * np.arange(nodes) / nodes
    e = np.exp(1j * theta)
    J = np.empty((N, N), dtype=complex)
    for j in range(N):
        acc = np.zeros(N, dtype=complex)
        for k in range(nodes):
            v = w.copy()
            v[j] += radius * e[k]
            acc += np.asarray(F(v), dtype=complex) * np.conj(e[k])
        J[:, j] = acc / (nodes * radius)
    return complex(np.linalg.det(J))


def ball_map(word: GroupWord) -> Callable[[BallPoint], BallPoint]:
    """The ball automorphism C^{-1} o word o C."""
    word = as_word(word)
    return lambda w: cayley_inverse(apply_point(word, cayley(w)))


def conjugated_action(word, s: float, f: Callable[[BallPoint], complex], w: BallPoint,
                      convention: PhaseConvention = DEFAULT) -> complex:
    """(C_s U_s(C^{-1} word C) C_s^{-1} f)(w): transfer, act, transfer back."""
    g = lambda p: transfer_to_halfspace(f, s, p, convention)
    h = lambda p: act_U(word, s, g, p, convention)
    return transfer_to_ball(h, s, w, convention)


@dataclass
class ConjugationReport:
    passed: bool
    max_modulus_error: float
    ratio_spread: float
    ratio: complex
    points: int
    details: dict = field(default_factory=dict)


def _continuous_log(values: Sequence[complex]) -> np.ndarray:
    """Logarithms along a sampled path with the imaginary part unwrapped."""
    v = np.asarray(values, dtype=complex)
    return np.log(np.abs(v)) + 1j * np.unwrap(np.angle(v))


def conjugated_action_check(word, s: float, f: Callable[[BallPoint], complex],
                            points: Sequence[BallPoint], tol: float = 1e-9,
                            convention: PhaseConvention = DEFAULT,
                            path_steps: int = 24) -> ConjugationReport:
    """Compare the conjugated action with (f o phi^{-1}) (J phi^{-1})^{s/(n+2)}.

    The Jacobian of phi^{-1} = C^{-1} word^{-1} C is computed numerically and
    its power is taken along the segment from 0 to each point, which gives a
    single holomorphic branch on the (convex) ball.  The two paths then agree
    in modulus, and their ratio is one constant per word.
    """
    word = as_word(word)
    inv_map = ball_map(word.inverse())
    n = points[0].n

    def F(v):
        return np.array(inv_map(BallPoint(tuple(v))).w)

    def jac(v):
        r = 0.25 * (1.0 - float(np.linalg.norm(v)))
        return holomorphic_jacobian(F, v, r)

    lhs, rhs = [], []
    max_mod = 0.0
    for w in points:
        a = conjugated_action(word, s, f, w, convention)
        target = np.array(w.w)
        path = [jac(target * t) for t in np.linspace(0.0, 1.0, path_steps + 1)]
        logj = _continuous_log(path)[-1]
        b = f(inv_map(w)) * cmath.exp(s / (n + 2) * logj)
        lhs.append(a)
        rhs.append(b)
        scale = max(abs(a), abs(b), 1e-300)
        max_mod = max(max_mod, abs(abs(a) - abs(b)) / scale)
    ratios = [a / b for a, b in zip(lhs, rhs) if abs(b) > 1e-300]
    r0 = ratios[0] if ratios else 1.0
    spread = max((abs(r - r0) for r in ratios), default=0.0)
    passed = max_mod <= tol and spread <= tol * max(1.0, abs(r0))
    return ConjugationReport(passed, max_mod, spread, complex(r0), len(points))
