"""Legendre polynomials for dimension n, harmonic-space dimensions and sphere
surface areas.

P_k^n is normalized by P_k^n(1) = 1 and satisfies the three-term recurrence

    (k + n - 2) P_{k+1}(x) = (2k + n - 2) x P_k(x) - k P_{k-1}(x)

with P_0 = 1 and P_1(x) = x.  For n = 2 this degenerates to the Chebyshev
recurrence, so a single code path covers all n >= 2.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np


def legendre_nd(k: int, n: int, x):
    """Value of P_k^n at x (scalar or ndarray); |x| > 1 is allowed."""
    if n < 2:
        raise ValueError("dimension n must be >= 2")
    if k < 0:
        raise ValueError("degree k must be >= 0")
    xs = np.asarray(x, dtype=float)
    scalar = xs.ndim == 0
    p_prev = np.ones_like(xs)
    if k == 0:
        return float(p_prev) if scalar else p_prev
    p = xs.copy()
    for j in range(1, k):
        p, p_prev = ((2 * j + n - 2) * xs * p - j * p_prev) / (j + n - 2), p
    return float(p) if scalar else p


def legendre_sequence(k_max: int, n: int, x) -> list:
    """[P_0(x), ..., P_{k_max}(x)] sharing one recurrence sweep."""
    if n < 2:
        raise ValueError("dimension n must be >= 2")
    xs = np.asarray(x, dtype=float)
    out = [np.ones_like(xs)]
    if k_max >= 1:
        out.append(xs.copy())
    for j in range(1, k_max):
        out.append(((2 * j + n - 2) * xs * out[j] - j * out[j - 1]) / (j + n - 2))
    return out


def legendre_upper(k: int, x) -> float:
    """(x + sqrt(x^2 - 1))^k, an upper bound for P_k^n(x) when x >= 1."""
    if k < 0:
        raise ValueError("degree k must be >= 0")
    xs = np.asarray(x, dtype=float)
    if np.any(xs < 1.0):
        raise ValueError("x must be >= 1")
    val = (xs + np.sqrt(xs * xs - 1.0)) ** k
    return float(val) if xs.ndim == 0 else val


@lru_cache(maxsize=None)
def legendre_coeffs(k: int, n: int) -> np.ndarray:
    """Monomial coefficients of P_k^n, ascending powers, via the recurrence."""
    if n < 2:
        raise ValueError("dimension n must be >= 2")
    if k == 0:
        return np.array([1.0])
    prev = np.array([1.0])
    cur = np.array([0.0, 1.0])
    for j in range(1, k):
        nxt = np.zeros(j + 2)
        nxt[1:] = (2 * j + n - 2) * cur
        nxt[: j] -= j * prev
        nxt /= j + n - 2
        prev, cur = cur, nxt
    cur.flags.writeable = False
    return cur


def legendre_leading(k: int, n: int) -> float:
    """Leading coefficient d_k of P_k^n."""
    return float(legendre_coeffs(k, n)[-1])


def harmonic_dim(k: int, n: int) -> int:
    """Dimension a_k of the space of harmonic homogeneous polynomials of
    degree k in n variables: (2k + n - 2) Gamma(k + n - 2) / (k! Gamma(n - 1)).

    The Gamma formula degenerates at n = 2, k = 0, where the value is 1.
    """
    if n < 2:
        raise ValueError("dimension n must be >= 2")
    if k < 0:
        raise ValueError("degree k must be >= 0")
    if n == 2:
        return 1 if k == 0 else 2
    return (2 * k + n - 2) * math.factorial(k + n - 3) // (
        math.factorial(k) * math.factorial(n - 2))


def sphere_area(n: int) -> float:
    """Surface area of S^{n-1}: 2 pi^{n/2} / Gamma(n/2)."""
    if n < 2:
        raise ValueError("dimension n must be >= 2")
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)
