"""Geometry of C^n seen as pairs of real vectors: the complexified quadratic
q(z) = z_1^2 + ... + z_n^2, the Lie norm, and Lie-ball membership tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ComplexPoint:
    """A point z = re + i*im of C^n, stored as two real n-vectors."""

    re: np.ndarray
    im: np.ndarray

    def __post_init__(self):
        re = np.asarray(self.re, dtype=float)
        im = np.asarray(self.im, dtype=float)
        if re.ndim != 1 or re.shape != im.shape or re.size < 1:
            raise ValueError("re and im must be equal-length vectors of length >= 1")
        if not (np.all(np.isfinite(re)) and np.all(np.isfinite(im))):
            raise ValueError("coordinates must be finite")
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    @property
    def n(self) -> int:
        return self.re.size

    @classmethod
    def from_complex(cls, z) -> "ComplexPoint":
        z = np.asarray(z, dtype=complex)
        return cls(z.real.copy(), z.imag.copy())

    def to_complex(self) -> np.ndarray:
        return self.re + 1j * self.im

    def scaled(self, lam: complex) -> "ComplexPoint":
        return ComplexPoint.from_complex(lam * self.to_complex())


@dataclass(frozen=True)
class LieGeometry:
    """Summary invariants of a point: |z|^2, q(z) and the squared Lie norm."""

    abs_sq: float
    q_value: complex
    lie_norm_sq: float


def q_of(z: ComplexPoint) -> complex:
    """q(z) = |re|^2 - |im|^2 + 2i<re, im>.

    Computed from the real/imaginary split rather than summing z_j^2 in
    complex arithmetic, which avoids cancellation between the squares.
    """
    xi, eta = z.re, z.im
    return complex(xi @ xi - eta @ eta, 2.0 * (xi @ eta))


def abs_sq(z: ComplexPoint) -> float:
    """|z|^2 = |re|^2 + |im|^2."""
    return float(z.re @ z.re + z.im @ z.im)


def lie_norm_sq(z: ComplexPoint) -> float:
    """|z|^2 + sqrt(|z|^4 - |q(z)|^2), clamping the radicand at zero.

    The radicand is nonnegative in exact arithmetic; the clamp only absorbs
    floating-point noise.
    """
    s = abs_sq(z)
    rad = s * s - abs(q_of(z)) ** 2
    if rad < 0.0:
        rad = 0.0
    return s + math.sqrt(rad)


def lie_data(z: ComplexPoint) -> LieGeometry:
    return LieGeometry(abs_sq(z), q_of(z), lie_norm_sq(z))


def in_lie_ball(z: ComplexPoint, R: float) -> bool:
    """Strict membership in the open Lie ball of radius R > 0."""
    if not R > 0:
        raise ValueError("R must be positive")
    return lie_norm_sq(z) < R * R


def shilov_sample(n: int, R: float, seed: int) -> ComplexPoint:
    """Deterministic pseudo-random point e^{it} * R * theta with theta on S^{n-1}.

    Such points satisfy lie_norm_sq == R^2: they lie on the distinguished
    boundary of the Lie ball.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not R > 0:
        raise ValueError("R must be positive")
    rng = np.random.default_rng(seed)
    theta = rng.standard_normal(n)
    while theta @ theta < 1e-12:
        theta = rng.standard_normal(n)
    theta /= math.sqrt(theta @ theta)
    t = rng.uniform(0.0, 2.0 * math.pi)
    return ComplexPoint(R * math.cos(t) * theta, R * math.sin(t) * theta)


def q_values(re: np.ndarray, im: np.ndarray) -> np.ndarray:
    """Vectorized q over rows of (m, n) real and imaginary parts."""
    re = np.asarray(re, dtype=float)
    im = np.asarray(im, dtype=float)
    return (np.einsum("ij,ij->i", re, re) - np.einsum("ij,ij->i", im, im)
            + 2j * np.einsum("ij,ij->i", re, im))


def lie_norm_sq_values(re: np.ndarray, im: np.ndarray) -> np.ndarray:
    """Vectorized squared Lie norm over rows of (m, n) parts."""
    s = np.einsum("ij,ij->i", re, re) + np.einsum("ij,ij->i", im, im)
    rad = s * s - np.abs(q_values(re, im)) ** 2
    return s + np.sqrt(np.maximum(rad, 0.0))
