"""Evaluation of the continued series sum_k sum_l p_{k,l}(q(z)) Y_{k,l}(z)
inside the Lie ball, with a geometric tail majorant when a decay estimate is
supplied.

Terms are summed in increasing degree k, inside a degree by member index,
with compensated (Kahan) accumulation, so results are reproducible and
independent of how points are batched.
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .complex_geometry import ComplexPoint, lie_norm_sq_values, q_values
from .lf_transform import DecayEstimate, LFExpansion
from .special_functions import harmonic_dim, sphere_area


@dataclass(frozen=True)
class ContinuationResult:
    """Partial sum of the continued series at one point."""

    value: complex
    terms_used: int                 # number of degrees summed (K + 1)
    tail_bound: float | None
    per_degree_norms: tuple         # sum_l |p_{k,l}(q(z)) Y_{k,l}(z)| per k


def tail_majorant(decay: DecayEstimate, n: int, K: int) -> float:
    """C_hat / sqrt(omega) * sum_{k > K} a_k (tau/rho_hat)^k, summed until the
    terms drop below 1e-18 of the running total."""
    x = decay.tau / decay.rho_hat
    if x >= 1.0:
        raise ValueError("tail majorant requires tau < rho_hat")
    total = 0.0
    k = K + 1
    while True:
        term = harmonic_dim(k, n) * x ** k
        total += term
        if term <= 1e-18 * total:
            break
        k += 1
    return decay.C_hat / math.sqrt(sphere_area(n)) * total


def _evaluate_batch(exp: LFExpansion, Z: np.ndarray, decay: DecayEstimate | None):
    """Values, per-degree norms (K+1, m) and tail bounds at an (m, n) array."""
    m = Z.shape[0]
    re, im = Z.real, Z.imag
    lie_sq = lie_norm_sq_values(re, im)
    bad = np.nonzero(lie_sq >= exp.R ** 2)[0]
    if bad.size:
        raise ValueError(
            f"point {bad[0]} lies outside the open Lie ball of radius {exp.R} "
            f"(lie_norm_sq {lie_sq[bad[0]]:.6g} >= {exp.R ** 2:.6g})")
    qz = q_values(re, im)

    value = np.zeros(m, dtype=complex)
    comp = np.zeros(m, dtype=complex)
    norms = np.zeros((exp.K + 1, m))
    for k in range(exp.K + 1):
        members = exp.basis(k).eval_at(Z)
        for l in range(1, harmonic_dim(k, exp.n) + 1):
            p = exp.profiles[(k, l)]
            if not p.populated:
                continue
            term = p.eval_at(qz) * members[l - 1]
            norms[k] += np.abs(term)
            y = term - comp
            t = value + y
            comp = (t - value) - y
            value = t

    bounds = [None] * m
    if decay is not None:
        if decay.tau >= decay.rho_hat:
            warnings.warn("tau/rho_hat >= 1: tail bound omitted")
        else:
            maj = tail_majorant(decay, exp.n, exp.K)
            tau_sq = decay.tau ** 2
            for i in range(m):
                if lie_sq[i] <= tau_sq:
                    bounds[i] = maj
    return value, norms, bounds


def evaluate(exp: LFExpansion, z: ComplexPoint,
             decay: DecayEstimate | None = None) -> ContinuationResult:
    """Partial sum at a single Lie-ball point.

    The tail bound is attached only when a decay estimate is supplied and the
    point satisfies lie_norm_sq(z) <= tau^2, the hypothesis under which the
    geometric majorant is valid.
    """
    if z.n != exp.n:
        raise ValueError(f"point dimension {z.n} != expansion dimension {exp.n}")
    Z = z.to_complex().reshape(1, -1)
    value, norms, bounds = _evaluate_batch(exp, Z, decay)
    return ContinuationResult(complex(value[0]), exp.K + 1, bounds[0],
                              tuple(float(x) for x in norms[:, 0]))


def _thread_count() -> int:
    raw = os.environ.get("LIEBALL_THREADS", "")
    if not raw:
        return 1
    count = int(raw)
    if count == 0:
        return os.cpu_count() or 1
    return max(1, count)


def grid_extend(exp: LFExpansion, points,
                decay: DecayEstimate | None = None) -> list:
    """Batch evaluation; returns [(point, ContinuationResult), ...] in input
    order.  The first out-of-ball point is reported by index.  Points may be
    processed in parallel (LIEBALL_THREADS); results are placed by index and
    do not depend on the thread count.
    """
    pts = list(points)
    if not pts:
        return []
    for i, z in enumerate(pts):
        if z.n != exp.n:
            raise ValueError(f"point {i} has dimension {z.n}, expected {exp.n}")
    Z = np.stack([z.to_complex() for z in pts])
    lie_sq = lie_norm_sq_values(Z.real, Z.imag)
    bad = np.nonzero(lie_sq >= exp.R ** 2)[0]
    if bad.size:
        raise ValueError(f"point {bad[0]} lies outside the open Lie ball "
                         f"of radius {exp.R}")
    workers = _thread_count()
    if workers > 1 and len(pts) > 1:
        chunks = np.array_split(np.arange(len(pts)), workers)
        results = [None] * len(pts)

        def run(idx):
            vals, norms, bounds = _evaluate_batch(exp, Z[idx], decay)
            return idx, vals, norms, bounds

        with ThreadPoolExecutor(max_workers=workers) as pool:
            for idx, vals, norms, bounds in pool.map(run, [c for c in chunks if c.size]):
                for j, i in enumerate(idx):
                    results[i] = ContinuationResult(
                        complex(vals[j]), exp.K + 1, bounds[j],
                        tuple(float(x) for x in norms[:, j]))
        return list(zip(pts, results))

    vals, norms, bounds = _evaluate_batch(exp, Z, decay)
    out = []
    for i, z in enumerate(pts):
        out.append((z, ContinuationResult(complex(vals[i]), exp.K + 1, bounds[i],
                                          tuple(float(x) for x in norms[:, i]))))
    return out
