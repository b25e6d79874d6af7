"""Product quadrature rules on S^{n-1} and Laplace-Fourier coefficients.

The rule is the classical product construction in spherical coordinates: a
uniform trapezoid rule in the azimuthal angle (exact for trigonometric degree
m-1 with m nodes) and Gauss nodes for the Gegenbauer weight (1-t^2)^{(m-2)/2}
in each polar factor.  A rule built for exact_degree d integrates every
spherical polynomial of total degree <= d to roundoff.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_gegenbauer, roots_legendre

from .errors import ResourceLimitError
from .harmonic_basis import HarmonicBasis

DEFAULT_NODE_CAP = 4_000_000


@dataclass(frozen=True)
class SphereRule:
    n: int
    nodes: np.ndarray      # (m, n), unit vectors
    weights: np.ndarray    # (m,), positive, summing to omega_{n-1}
    exact_degree: int

    def __len__(self):
        return self.weights.size

    def integrate(self, values) -> complex:
        return complex(np.asarray(values) @ self.weights)


@lru_cache(maxsize=None)
def build_rule(n: int, exact_degree: int, node_cap: int = DEFAULT_NODE_CAP) -> SphereRule:
    if n < 2:
        raise ValueError("dimension n must be >= 2")
    if exact_degree < 0:
        raise ValueError("exact_degree must be >= 0")
    m_phi = exact_degree + 1
    m_gauss = exact_degree // 2 + 1
    total = m_phi * m_gauss ** (n - 2)
    if total > node_cap:
        raise ResourceLimitError(
            f"rule would need {total} nodes, above the cap of {node_cap}")

    phi = 2.0 * math.pi * np.arange(m_phi) / m_phi
    nodes = np.stack([np.cos(phi), np.sin(phi)], axis=1)
    weights = np.full(m_phi, 2.0 * math.pi / m_phi)
    # peel off one polar angle at a time: x = (t, sqrt(1-t^2) * y)
    for level in range(n - 2):
        dim = 2 + level            # current sphere dimension S^{dim-1} -> S^{dim}
        lam = (dim - 1) / 2.0
        if lam == 0.5:
            t, w = roots_legendre(m_gauss)
        else:
            t, w = roots_gegenbauer(m_gauss, lam)
        sin = np.sqrt(1.0 - t * t)
        new_nodes = np.empty((m_gauss * nodes.shape[0], dim + 1))
        new_nodes[:, 0] = np.repeat(t, nodes.shape[0])
        new_nodes[:, 1:] = np.repeat(sin, nodes.shape[0])[:, None] * np.tile(
            nodes, (m_gauss, 1))
        nodes = new_nodes
        weights = np.repeat(w, weights.size) * np.tile(weights, m_gauss)
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return SphereRule(n, nodes, weights, exact_degree)


def lf_coefficient(f, basis: HarmonicBasis, l: int, r: float, rule: SphereRule) -> complex:
    """Quadrature value of the (k, l) Laplace-Fourier coefficient at radius r:
    sum_j w_j f(r theta_j) Y_{k,l}(theta_j).

    The basis is real, so integrating against Y itself and against its
    conjugate coincide.  f is called once per node with a real n-vector;
    an evaluation failure is re-raised with the node index attached.
    """
    if not 1 <= l <= len(basis):
        raise ValueError(f"l must lie in 1..{len(basis)}")
    if basis.n != rule.n:
        raise ValueError("basis and rule dimensions differ")
    vals = np.empty(len(rule), dtype=complex)
    for j, theta in enumerate(rule.nodes):
        try:
            vals[j] = f(r * theta)
        except Exception as exc:
            raise RuntimeError(f"function evaluation failed at node {j}") from exc
    y = basis.eval_at(rule.nodes)[l - 1].real
    return complex(np.sum(vals * y * rule.weights))


def coefficient_samples(f_values: np.ndarray, basis_matrix: np.ndarray,
                        weights: np.ndarray) -> np.ndarray:
    """All degree-k coefficients at once: (a_k,) = basis_matrix @ (w * f)."""
    return basis_matrix @ (weights * f_values)
