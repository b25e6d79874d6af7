"""Runnable property checks for the identities and inequalities the library
is built on: the Legendre product bound on the Lie ball of radius tau, the
maximum principle for homogeneous polynomials on the Lie ball, homogeneous
Taylor decomposition, and holomorphic extension of harmonic polynomials
through the full pipeline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .complex_geometry import ComplexPoint, lie_norm_sq_values, q_values
from .harmonic_basis import build_basis
from .holo_continuation import grid_extend
from .lf_transform import FunctionSpec, expand
from .multipoly import (degree, eval_terms, gradient, homogeneous_parts,
                        laplacian)
from .special_functions import legendre_leading, legendre_sequence

Q_SMALL_RTOL = 1e-8
MAX_DETAILS = 10


@dataclass(frozen=True)
class CheckReport:
    name: str
    trials: int
    failures: int
    worst_margin: float
    details: tuple = ()

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_json(self) -> dict:
        return {"name": self.name, "trials": self.trials,
                "failures": self.failures, "worst_margin": self.worst_margin,
                "details": list(self.details)}


def _sample_lie_ball(n: int, tau: float, trials: int, rng) -> tuple:
    """Points with lie_norm_sq <= tau^2, one tenth of them real with |x| near
    tau (where the product bound is attained)."""
    re = rng.standard_normal((trials, n))
    im = rng.standard_normal((trials, n))
    nreal = trials // 10
    im[:nreal] = 0.0
    lie = np.sqrt(lie_norm_sq_values(re, im))
    u = rng.uniform(0.0, 1.0, trials) ** (1.0 / (2 * n))
    u[:nreal] = rng.uniform(0.9, 1.0, nreal)
    scale = tau * u / lie
    return re * scale[:, None], im * scale[:, None]


def check_add3(n: int, k_max: int, tau: float, trials: int, seed: int) -> CheckReport:
    """|q(z)|^k P_k^n(|z|^2/|q(z)|) <= tau^(2k) whenever lie_norm_sq(z) <= tau^2.

    The hypothesis is sampled in its rearranged membership form; the leading
    coefficient branch replaces the indeterminate product when q(z) is
    negligible against |z|^2.
    """
    if not tau > 0:
        raise ValueError("tau must be positive")
    rng = np.random.default_rng(seed)
    re, im = _sample_lie_ball(n, tau, trials, rng)
    s = np.einsum("ij,ij->i", re, re) + np.einsum("ij,ij->i", im, im)
    aq = np.abs(q_values(re, im))
    small = aq <= Q_SMALL_RTOL * s
    x = np.where(small, 1.0, s / np.maximum(aq, 1e-300))
    seq = legendre_sequence(k_max, n, x)

    failures = 0
    worst = 0.0
    details = []
    for k in range(k_max + 1):
        lhs = np.where(small, legendre_leading(k, n) * s ** k, aq ** k * seq[k])
        margin = lhs / tau ** (2 * k)
        bad = margin > 1.0 + 1e-10
        failures += int(bad.sum())
        worst = max(worst, float(margin.max()))
        for i in np.nonzero(bad)[0][:2]:
            if len(details) < MAX_DETAILS:
                details.append(f"k={k} z=({re[i].tolist()},{im[i].tolist()}) "
                               f"margin={margin[i]:.3e}")
    return CheckReport(f"add3[n={n},k<={k_max},tau={tau}]",
                       trials * (k_max + 1), failures, worst, tuple(details))


def _sphere_samples(n: int, count: int, rng) -> np.ndarray:
    x = rng.standard_normal((count, n))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def _ascend(terms: dict, n: int, theta: np.ndarray, steps: int = 200) -> tuple:
    """Projected gradient ascent for |p| on the unit sphere from theta."""
    grads = gradient(terms, n)
    x = theta.copy()
    val = abs(complex(eval_terms(terms, x, n)).real)
    step = 0.1
    for _ in range(steps):
        p = complex(eval_terms(terms, x, n)).real
        g = np.array([complex(eval_terms(gi, x, n)).real for gi in grads])
        g = 2.0 * p * g
        g -= (g @ x) * x
        if np.linalg.norm(g) < 1e-16:
            break
        cand = x + step * g / max(np.linalg.norm(g), 1e-300)
        cand /= np.linalg.norm(cand)
        cval = abs(complex(eval_terms(terms, cand, n)).real)
        if cval > val:
            x, val = cand, cval
            step = min(step * 1.3, 0.5)
        else:
            step *= 0.5
            if step < 1e-14:
                break
    return x, val


def check_hua(terms: dict, n: int, R: float, trials: int, seed: int) -> CheckReport:
    """Maximum of a homogeneous polynomial over the closed Lie ball equals its
    maximum over the real ball (attained on the sphere).

    The real-sphere maximum S is estimated by dense sampling refined with
    projected gradient ascent.  Interior Lie-ball samples must stay below
    S * (1 + 1e-8); the distinguished-boundary family e^{it} R theta must
    reach S within 1e-6 relative.
    """
    degrees = {sum(a) for a in terms}
    if len(degrees) != 1:
        raise ValueError(f"polynomial is not homogeneous (degrees {sorted(degrees)})")
    m = degrees.pop()
    rng = np.random.default_rng(seed)

    thetas = _sphere_samples(n, 4096, rng)
    vals = np.abs(eval_terms(terms, thetas, n).real)
    order = np.argsort(vals)[::-1]
    best_theta, best = thetas[order[0]], float(vals[order[0]])
    for i in order[:12]:
        cand_theta, cand = _ascend(terms, n, thetas[i])
        if cand > best:
            best_theta, best = cand_theta, cand
    S = best * R ** m

    # interior samples: scaled distinguished-boundary points
    t = rng.uniform(0.0, 2.0 * math.pi, trials)
    u = rng.uniform(0.0, 1.0, trials)
    theta_i = _sphere_samples(n, trials, rng)
    Z = (u * np.exp(1j * t))[:, None] * (R * theta_i)
    inner = np.abs(eval_terms(terms, Z, n))
    worst = float(inner.max()) / S
    failures = int((inner > S * (1.0 + 1e-8)).sum())
    details = []
    for i in np.nonzero(inner > S * (1.0 + 1e-8))[0][:MAX_DETAILS]:
        details.append(f"|p(z)|={inner[i]:.6e} > S={S:.6e} at sample {i}")

    # distinguished boundary attains the maximum (|p(e^{it} R theta)| is
    # t-independent for homogeneous p, so the theta sweep plus the ascent
    # point must reproduce S)
    shilov_thetas = np.vstack([theta_i, best_theta])
    ts = rng.uniform(0.0, 2.0 * math.pi, len(shilov_thetas))
    Zs = np.exp(1j * ts)[:, None] * (R * shilov_thetas)
    shilov_max = float(np.abs(eval_terms(terms, Zs, n)).max())
    eq_margin = shilov_max / S
    if not (1.0 - 1e-6 <= eq_margin <= 1.0 + 1e-6):
        failures += 1
        details.append(f"distinguished-boundary max / sphere max = {eq_margin:.9f}")
        worst = max(worst, eq_margin)

    return CheckReport(f"hua[n={n},deg={m}]", trials + 1, failures, worst,
                       tuple(details))


def taylor_parts(terms: dict) -> list:
    """Split a polynomial into homogeneous parts, ascending degree; the parts
    sum back to the input exactly."""
    parts = homogeneous_parts(terms)
    return [(d, parts[d]) for d in sorted(parts)]


def check_harmonic_extension(terms: dict, n: int, R: float, trials: int,
                             seed: int, rtol: float = 1e-9) -> CheckReport:
    """Pipeline value of a harmonic polynomial equals its direct complex
    evaluation at random Lie-ball points."""
    lap = laplacian(terms, n)
    if lap:
        scale = math.sqrt(sum(abs(c) ** 2 for c in terms.values()))
        resid = max(abs(complex(c)) for c in lap.values()) / scale
        if resid > 1e-10:
            raise ValueError(f"polynomial is not harmonic (relative Laplacian "
                             f"residual {resid:.2e})")
    d = degree(terms)
    spec = FunctionSpec.polynomial(n, R, terms)
    exp = expand(spec, K=max(d, 0))

    rng = np.random.default_rng(seed)
    re = rng.standard_normal((trials, n))
    im = rng.standard_normal((trials, n))
    lie = np.sqrt(lie_norm_sq_values(re, im))
    u = R * 0.98 * rng.uniform(0.05, 1.0, trials) / lie
    Z = (re + 1j * im) * u[:, None]
    points = [ComplexPoint(z.real, z.imag) for z in Z]
    results = grid_extend(exp, points)
    direct = eval_terms(terms, Z, n)

    scale = float(np.abs(direct).max())
    failures = 0
    worst = 0.0
    details = []
    for i, (_, res) in enumerate(results):
        err = abs(res.value - direct[i]) / max(abs(direct[i]), 1e-12 * scale)
        worst = max(worst, err)
        if err > rtol:
            failures += 1
            if len(details) < MAX_DETAILS:
                details.append(f"point {i}: rel err {err:.3e}")
    return CheckReport(f"harmonic_extension[n={n},deg={d}]", trials, failures,
                       worst, tuple(details))


def random_homogeneous(n: int, m: int, terms_count: int, seed: int) -> dict:
    """Deterministic random homogeneous polynomial of degree m in n variables."""
    rng = np.random.default_rng(seed)
    out = {}
    for _ in range(terms_count):
        cuts = rng.integers(0, n, size=m)
        alpha = tuple(int((cuts == i).sum()) for i in range(n))
        out[alpha] = out.get(alpha, 0.0) + float(rng.standard_normal())
    return {a: c for a, c in out.items() if c != 0.0}


def random_harmonic(n: int, k: int, seed: int) -> dict:
    """Deterministic random harmonic polynomial: a combination of basis members."""
    rng = np.random.default_rng(seed)
    basis = build_basis(n, k)
    weights = rng.standard_normal(len(basis))
    out = {}
    for w, member in zip(weights, basis.members):
        for a, c in member.terms.items():
            out[a] = out.get(a, 0.0) + w * c
    return {a: c for a, c in out.items() if c != 0.0}
