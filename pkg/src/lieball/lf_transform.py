"""Laplace-Fourier expansion of a function on the ball B_R: radial coefficient
samples, even profile extraction in t = r^2, structural checks, and the
coefficient-decay estimate behind the extension criterion.

The profile p of a degree-k coefficient is recovered from samples of
f_k(r) ~ r^k p(r^2) by weighted least squares in a Chebyshev basis.  Two
numerical facts shape the fit:

* samples at small r carry no information once r^k drops below the
  quadrature noise floor, so the fit runs on the resolved radii only;
* evaluating the fitted polynomial on a complex circle |zeta| = rho
  amplifies coefficient noise by the Chebyshev growth factor off the data
  interval, so the series is truncated where the estimated dropped-signal
  plus kept-noise error on that circle is smallest.

Polynomial inputs skip sampling entirely: they are split into harmonic
components times powers of |x|^2 in exact rational arithmetic and projected
on the basis, so their profiles are exact up to one float rounding per
coefficient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .harmonic_basis import (HarmonicBasis, build_basis, harmonic_projection,
                             monomial_sphere_integral)
from .multipoly import (divide_by_q, eval_terms, homogeneous_parts, poly_add,
                        poly_scale)
from .special_functions import harmonic_dim, sphere_area
from .sphere_integration import build_rule

KINDS = ("polynomial", "inverse_quadratic", "newton_kernel", "exp_linear")

POPULATED_RTOL = 1e-13      # profiles with samples below this times the
                            # global sample scale are stored as zero
NOISE_FLOOR_RTOL = 1e-15    # absolute quadrature noise per sample


@dataclass(frozen=True)
class FunctionSpec:
    """Declarative description of the input function on B_R."""

    kind: str
    n: int
    R: float
    params: dict

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}; expected one of {KINDS}")
        if self.n < 2:
            raise ValueError("dimension n must be >= 2")
        if not self.R > 0:
            raise ValueError("radius R must be positive")
        if self.kind == "polynomial":
            coeffs = self.params.get("coefficients")
            if not isinstance(coeffs, dict):
                raise ValueError("polynomial params need a 'coefficients' map")
            for alpha, c in coeffs.items():
                if len(alpha) != self.n:
                    raise ValueError(f"multi-index {alpha} has wrong length")
                if not (math.isfinite(complex(c).real) and math.isfinite(complex(c).imag)):
                    raise ValueError("polynomial coefficients must be finite")
        elif self.kind == "inverse_quadratic":
            a = self.params.get("a")
            if a is None or not a > self.R ** 2:
                raise ValueError("inverse_quadratic needs a > R^2 "
                                 "(singularity outside the closed ball)")
        elif self.kind == "newton_kernel":
            if self.n != 3:
                raise ValueError("newton_kernel is defined for n = 3 only")
            y0 = np.asarray(self.params.get("y0"), dtype=float)
            if y0.shape != (3,) or not np.linalg.norm(y0) > self.R:
                raise ValueError("newton_kernel needs a pole y0 with |y0| > R")
        elif self.kind == "exp_linear":
            c = np.asarray(self.params.get("c"), dtype=float)
            if c.shape != (self.n,):
                raise ValueError("exp_linear needs a direction vector c of length n")

    # -- constructors ------------------------------------------------------
    @classmethod
    def polynomial(cls, n, R, coefficients):
        coeffs = {tuple(int(a) for a in alpha): complex(c)
                  for alpha, c in coefficients.items() if c != 0}
        return cls("polynomial", n, R, {"coefficients": coeffs})

    @classmethod
    def inverse_quadratic(cls, n, R, a):
        return cls("inverse_quadratic", n, R, {"a": float(a)})

    @classmethod
    def newton_kernel(cls, R, y0):
        return cls("newton_kernel", 3, R, {"y0": np.asarray(y0, dtype=float)})

    @classmethod
    def exp_linear(cls, n, R, c):
        return cls("exp_linear", n, R, {"c": np.asarray(c, dtype=float)})

    # -- properties --------------------------------------------------------
    @property
    def is_real(self) -> bool:
        if self.kind != "polynomial":
            return True
        return all(complex(c).imag == 0.0
                   for c in self.params["coefficients"].values())

    @property
    def poly_degree(self):
        if self.kind != "polynomial":
            return None
        coeffs = self.params["coefficients"]
        return max((sum(a) for a in coeffs), default=0)

    # -- evaluation --------------------------------------------------------
    def eval_real(self, points) -> np.ndarray:
        """Values at an (m, n) array of real points."""
        X = np.asarray(points, dtype=float)
        if self.kind == "polynomial":
            return eval_terms(self.params["coefficients"], X, self.n)
        if self.kind == "inverse_quadratic":
            return 1.0 / (self.params["a"] - np.einsum("ij,ij->i", X, X))
        if self.kind == "newton_kernel":
            d = X - self.params["y0"]
            return 1.0 / np.sqrt(np.einsum("ij,ij->i", d, d))
        return np.exp(X @ self.params["c"])

    def continuation(self, Z) -> np.ndarray:
        """Closed-form holomorphic extension at an (m, n) complex array.

        For the Newton kernel the principal square root is used, which is
        valid on the Lie balls probed by the test suite (q(z - y0) stays in
        the right half plane there).
        """
        Z = np.asarray(Z, dtype=complex)
        q = Z[:, 0] * 0.0
        if self.kind == "polynomial":
            return eval_terms(self.params["coefficients"], Z, self.n)
        if self.kind == "inverse_quadratic":
            q = np.sum(Z * Z, axis=1)
            return 1.0 / (self.params["a"] - q)
        if self.kind == "newton_kernel":
            d = Z - self.params["y0"]
            return 1.0 / np.sqrt(np.sum(d * d, axis=1))
        return np.exp(Z @ self.params["c"])

    # -- wire format -------------------------------------------------------
    def to_json(self) -> dict:
        if self.kind == "polynomial":
            rows = [{"alpha": list(a), "re": complex(c).real, "im": complex(c).imag}
                    for a, c in sorted(self.params["coefficients"].items())]
            params = rows
        elif self.kind == "inverse_quadratic":
            params = {"a": self.params["a"]}
        elif self.kind == "newton_kernel":
            params = {"y0": list(self.params["y0"])}
        else:
            params = {"c": list(self.params["c"])}
        return {"kind": self.kind, "n": self.n, "R": self.R, "params": params}

    @classmethod
    def from_json(cls, obj: dict) -> "FunctionSpec":
        for key in ("kind", "n", "R", "params"):
            if key not in obj:
                raise ValueError(f"function spec is missing the field {key!r}")
        kind, n, R, params = obj["kind"], obj["n"], obj["R"], obj["params"]
        if kind == "polynomial":
            if not isinstance(params, list):
                raise ValueError("polynomial params must be a list of "
                                 "{alpha, re, im} rows")
            coeffs = {}
            for row in params:
                alpha = tuple(int(a) for a in row["alpha"])
                coeffs[alpha] = coeffs.get(alpha, 0.0) + complex(
                    row.get("re", 0.0), row.get("im", 0.0))
            return cls.polynomial(n, R, coeffs)
        if kind == "inverse_quadratic":
            return cls.inverse_quadratic(n, R, params["a"])
        if kind == "newton_kernel":
            return cls.newton_kernel(R, params["y0"])
        if kind == "exp_linear":
            return cls.exp_linear(n, R, params["c"])
        raise ValueError(f"unknown kind {kind!r}")


@dataclass(frozen=True)
class ProfilePoly:
    """Profile p of one (k, l) coefficient: f_{k,l}(r) ~ r^k p(r^2)."""

    k: int
    l: int
    coeffs: np.ndarray          # ascending powers of t; complex when f is
    fit_residual: float
    source: str                 # "exact" or "fitted"
    eval_error: float = 0.0     # estimated accuracy of circle evaluations

    @property
    def populated(self) -> bool:
        return bool(np.any(self.coeffs != 0))

    def eval_at(self, t):
        return np.polynomial.polynomial.polyval(t, self.coeffs)


@dataclass(frozen=True)
class DecayEstimate:
    """Fitted geometric decay of the profile sup-norms on |zeta| = tau^2."""

    rho_hat: float
    tau: float
    C_hat: float
    window: tuple
    r_squared_fit: float | None
    band_limited: bool = False

    def __post_init__(self):
        if not 0 < self.tau < self.rho_hat:
            raise ValueError("estimate requires 0 < tau < rho_hat")
        if not self.C_hat > 0:
            raise ValueError("C_hat must be positive")


@dataclass(frozen=True)
class LFExpansion:
    n: int
    R: float
    K: int
    M: int
    spec: FunctionSpec
    profiles: dict                      # (k, l) -> ProfilePoly
    radial_nodes: np.ndarray | None = None
    radial_samples: dict | None = None  # (k, l) -> samples over radial_nodes
    quad_degree: int | None = None
    quad_converged: bool = True
    decay: "DecayEstimate | None" = None

    def basis(self, k: int) -> HarmonicBasis:
        return build_basis(self.n, k)

    def profile(self, k: int, l: int) -> ProfilePoly:
        return self.profiles[(k, l)]

    def with_decay(self, decay: DecayEstimate) -> "LFExpansion":
        return replace(self, decay=decay)


# ---------------------------------------------------------------------------
# sampling and fitting
# ---------------------------------------------------------------------------

def radial_grid(count: int, R: float) -> np.ndarray:
    """Chebyshev points of [0.02 R, 0.95 R], ascending.

    r = 0 is avoided: the division by r^k is indeterminate there and the
    behavior near zero is checked by the structural slope test instead.
    """
    lo, hi = 0.02 * R, 0.95 * R
    j = np.arange(count)
    return np.sort((lo + hi) / 2 + (hi - lo) / 2 * np.cos((2 * j + 1) * math.pi / (2 * count)))


def _sample_matrix(spec: FunctionSpec, K: int, r: np.ndarray, rule) -> dict:
    """Quadrature samples of every coefficient: {k: (a_k, len(r)) array}."""
    out = {}
    fvals = np.empty((len(r), len(rule)), dtype=complex)
    for i, ri in enumerate(r):
        fvals[i] = spec.eval_real(ri * rule.nodes)
    wf = fvals * rule.weights
    for k in range(K + 1):
        Y = build_basis(spec.n, k).eval_at(rule.nodes).real
        out[k] = wf @ Y.T  # (len(r), a_k)
    return out


def _fit_profile(r, s, k, M, floor_abs, eval_radius):
    """Weighted least squares for s_j ~ r_j^k p(r_j^2); returns monomial
    coefficients of p (length M+1), max residual in sample space, and an
    error estimate for evaluations on |zeta| = eval_radius."""
    own = np.abs(s).max()
    noise = floor_abs
    if k >= 4:
        # at high k the smallest radii sit under the noise floor; use them
        # as an empirical noise gauge
        noise = max(noise, 1.48 * float(np.median(np.abs(s[:8]))))
    env = (r / r[-1]) ** k
    resolved = env >= min(1.0, 10 * noise / own)
    if resolved.sum() < 4:
        resolved = env >= np.sort(env)[-4]
    rr, ss = r[resolved], s[resolved]
    t = rr * rr
    a, b = float(t.min()), float(t.max())
    D = max(0, min(M, int(resolved.sum()) - 3))
    if b - a < 1e-14 * b:
        c0 = ss[-1] / rr[-1] ** k
        coeffs = np.zeros(M + 1, dtype=s.dtype)
        coeffs[0] = c0
        fitted = r ** k * c0
        return coeffs, float(np.abs(fitted - s).max()), float(noise / own)

    u = (2 * t - (a + b)) / (b - a)
    V = np.polynomial.chebyshev.chebvander(u, D)
    A = V * (rr ** k)[:, None]
    U, sig, Vt = np.linalg.svd(A, full_matrices=False)
    c = Vt.T @ ((U.conj().T @ ss) / sig)
    dof = max(len(ss) - (D + 1), 1)
    sigma_hat = max(float(np.linalg.norm(A @ c - ss)) / math.sqrt(dof), 0.5 * noise)
    coef_sigma = sigma_hat * np.sqrt(((Vt.T / sig) ** 2).sum(axis=1))

    # truncate the series where dropped-signal plus kept-noise on the
    # evaluation circle is smallest; coefficient magnitudes are soft-
    # thresholded by their sigma so noise-dominated ones do not register
    # as dropped signal
    zeta = eval_radius * np.exp(2j * math.pi * np.arange(32) / 32)
    uz = (2 * zeta - (a + b)) / (b - a)
    amps = np.abs(np.polynomial.chebyshev.chebvander(uz, D)).max(axis=0)
    cn = np.maximum(np.abs(c) - 3.0 * coef_sigma, 0.0)
    kept_noise = np.cumsum(coef_sigma * amps)
    sig_amp = cn * amps
    dropped = np.concatenate([np.cumsum(sig_amp[::-1])[::-1][1:], [0.0]])
    total = dropped + kept_noise
    mstar = int(np.argmin(total))
    eval_err = float(total[mstar])
    if mstar < D:
        c, *_ = np.linalg.lstsq(A[:, : mstar + 1], ss, rcond=None)

    series = np.polynomial.Chebyshev(c, domain=[a, b])
    mono = series.convert(kind=np.polynomial.Polynomial).coef
    coeffs = np.zeros(M + 1, dtype=mono.dtype)
    coeffs[: len(mono)] = mono
    fitted = r ** k * np.polynomial.polynomial.polyval(r * r, coeffs)
    return coeffs, float(np.abs(fitted - s).max()), eval_err


def _default_quad_degree(spec: FunctionSpec, K: int) -> int:
    deg = spec.poly_degree
    return 2 * K + (deg if deg is not None else 0) + 4


def expand(spec: FunctionSpec, K: int, M: int = 24, radial_nodes: int | None = None,
           quad_degree: int | None = None, method: str = "auto",
           quad_tol: float = 1e-11) -> LFExpansion:
    """Laplace-Fourier expansion of spec up to degree K with profile degree M.

    method: "exact" (polynomial inputs only), "quadrature", or "auto"
    (exact when available).  Non-polynomial inputs with no explicit
    quad_degree get a convergence study: the rule degree is doubled until
    the sampled coefficients move by less than quad_tol.
    """
    if K < 0 or M < 0:
        raise ValueError("K and M must be nonnegative")
    if method not in ("auto", "exact", "quadrature"):
        raise ValueError("method must be auto, exact or quadrature")
    if method == "exact" and spec.kind != "polynomial":
        raise ValueError("exact expansion requires a polynomial spec")
    if method == "auto":
        method = "exact" if spec.kind == "polynomial" else "quadrature"
    if method == "exact":
        return _expand_exact(spec, K, M)

    nr = radial_nodes if radial_nodes is not None else max(2 * M + 2, M + 10)
    if nr < M + 1:
        raise ValueError("radial_nodes must be at least M + 1")
    r = radial_grid(nr, spec.R)

    converged = True
    if quad_degree is not None:
        rule = build_rule(spec.n, quad_degree)
        samples = _sample_matrix(spec, K, r, rule)
    elif spec.kind == "polynomial":
        rule = build_rule(spec.n, _default_quad_degree(spec, K))
        samples = _sample_matrix(spec, K, r, rule)
    else:
        deg = 2 * K + 4
        rule = build_rule(spec.n, deg)
        samples = _sample_matrix(spec, K, r, rule)
        converged = False
        for _ in range(3):
            deg *= 2
            finer = _sample_matrix(spec, K, r, build_rule(spec.n, deg))
            change = max(np.abs(finer[k] - samples[k]).max() for k in samples)
            samples = finer
            if change < quad_tol:
                converged = True
                break

    scale = max(float(np.abs(samples[k]).max()) for k in samples) or 1.0
    floor_abs = NOISE_FLOOR_RTOL * scale * 10
    eval_radius = (0.5 * spec.R) ** 2

    profiles = {}
    stored = {}
    for k in range(K + 1):
        for l in range(1, harmonic_dim(k, spec.n) + 1):
            s = samples[k][:, l - 1]
            if spec.is_real:
                s = s.real
            stored[(k, l)] = s
            if np.abs(s).max() < POPULATED_RTOL * scale:
                profiles[(k, l)] = ProfilePoly(
                    k, l, np.zeros(M + 1), float(np.abs(s).max()), "fitted")
                continue
            coeffs, resid, eval_err = _fit_profile(r, s, k, M, floor_abs, eval_radius)
            profiles[(k, l)] = ProfilePoly(k, l, coeffs, resid, "fitted", eval_err)

    return LFExpansion(spec.n, spec.R, K, M, spec, profiles,
                       radial_nodes=r, radial_samples=stored,
                       quad_degree=rule.exact_degree, quad_converged=converged)


# ---------------------------------------------------------------------------
# exact path for polynomial inputs
# ---------------------------------------------------------------------------

def _harmonic_components(terms: dict, n: int) -> dict:
    """Decompose sum of homogeneous parts into {(k, m): harmonic terms} with
    part = sum_m |x|^{2m} h_{k,m}; exact rational arithmetic."""
    out = {}
    for d, part in homogeneous_parts(terms).items():
        g = part
        m = 0
        while g:
            kdeg = d - 2 * m
            h = harmonic_projection(g, n, kdeg)
            if h:
                out[(kdeg, m)] = h
            rem = poly_add(g, poly_scale(h, -1))
            g = divide_by_q(rem, n) if rem else {}
            m += 1
    return out


@lru_cache(maxsize=None)
def _basis_gram_data(n: int, k: int):
    """Support list, member matrix and monomial Gram matrix for one basis."""
    basis = build_basis(n, k)
    support = sorted({a for member in basis.members for a in member.terms})
    index = {a: i for i, a in enumerate(support)}
    members = np.zeros((len(basis), len(support)))
    for row, member in enumerate(basis.members):
        for a, c in member.terms.items():
            members[row, index[a]] = c
    gram = np.zeros((len(support), len(support)))
    for i, a in enumerate(support):
        for j in range(i, len(support)):
            val = monomial_sphere_integral(
                tuple(x + y for x, y in zip(a, support[j])), n)
            gram[i, j] = gram[j, i] = val
    return index, members, gram


def _basis_coefficients(h: dict, basis: HarmonicBasis) -> np.ndarray:
    """Inner products of an exact harmonic polynomial with basis members."""
    index, members, gram = _basis_gram_data(basis.n, basis.k)
    vec = np.zeros(len(index))
    for a, c in h.items():
        vec[index[a]] = float(c)
    return members @ (gram @ vec)


def _expand_exact(spec: FunctionSpec, K: int, M: int) -> LFExpansion:
    coeffs = spec.params["coefficients"]
    re_terms = {a: Fraction(c.real) for a, c in coeffs.items() if c.real}
    im_terms = {a: Fraction(c.imag) for a, c in coeffs.items() if c.imag}
    cplx = bool(im_terms)
    dtype = complex if cplx else float

    table = {}
    for terms, unit in ((re_terms, 1.0), (im_terms, 1j)):
        if not terms:
            continue
        for (k, m), h in _harmonic_components(terms, spec.n).items():
            if k > K:
                continue
            b = build_basis(spec.n, k)
            for l, c in enumerate(_basis_coefficients(h, b), start=1):
                if c != 0.0:
                    key = (k, l)
                    tab = table.setdefault(key, {})
                    tab[m] = tab.get(m, 0.0) + unit * c

    deg = spec.poly_degree
    width = max(M, deg // 2 if deg else 0) + 1
    profiles = {}
    for k in range(K + 1):
        for l in range(1, harmonic_dim(k, spec.n) + 1):
            tab = table.get((k, l))
            arr = np.zeros(width, dtype=dtype)
            if tab:
                for m, c in tab.items():
                    arr[m] = c
            profiles[(k, l)] = ProfilePoly(k, l, arr, 0.0, "exact")
    return LFExpansion(spec.n, spec.R, K, M, spec, profiles)


# ---------------------------------------------------------------------------
# structural checks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StructuralRow:
    k: int
    l: int
    populated: bool
    odd_leakage: float | None
    leakage_precision: float | None
    slope: float | None
    violations: tuple


@dataclass(frozen=True)
class StructuralReport:
    rows: tuple

    @property
    def violations(self):
        return [(row.k, row.l, v) for row in self.rows for v in row.violations]


def structural_check(exp: LFExpansion, odd_tol: float = 1e-8,
                     slope_slack: float = 0.1) -> StructuralReport:
    """Verify the structural facts behind the profile definition on sampled
    data: r^{-k} f_{k,l}(r) contains no odd powers of r, and f_{k,l} vanishes
    like r^k at 0.  Profiles below the noise floor are reported unpopulated;
    checks are run on the radii where the signal resolves above noise.
    """
    if exp.radial_samples is None:
        r = radial_grid(max(2 * exp.M + 2, exp.M + 10), exp.R)
        samples = {key: (r ** p.k) * p.eval_at(r * r)
                   for key, p in exp.profiles.items()}
    else:
        r = exp.radial_nodes
        samples = exp.radial_samples

    scale = max(float(np.abs(s).max()) for s in samples.values()) or 1.0
    floor = NOISE_FLOOR_RTOL * scale * 10

    rows = []
    for (k, l), s in sorted(samples.items()):
        own = float(np.abs(s).max())
        if own < POPULATED_RTOL * scale:
            rows.append(StructuralRow(k, l, False, None, None, None, ()))
            continue
        noise = floor
        if k >= 4:
            noise = max(noise, 1.48 * float(np.median(np.abs(s[:8]))))
        resolved = np.abs(s) >= np.maximum(1e-6 * own, 10 * noise)
        violations = []

        leakage = precision = None
        if resolved.sum() >= 8:
            leakage, precision = _odd_leakage(r[resolved], s[resolved], k, noise)
            if leakage > max(odd_tol, precision):
                violations.append(
                    f"odd-power leakage {leakage:.2e} (precision {precision:.2e})")

        slope = None
        # the slope needs tighter resolution than the fit: a relative sample
        # error eps contributes eps / (log-r span) to the measured slope
        idx = np.nonzero(np.abs(s) >= np.maximum(1e-6 * own, 3000 * noise))[0]
        if idx.size >= 3:
            sel = idx[:3]
            logs = np.log(np.abs(s[sel]).astype(float))
            logr = np.log(r[sel])
            slope = float(np.polyfit(logr, logs, 1)[0])
            span = float(logr[-1] - logr[0])
            prec = 3.0 * float(noise / np.abs(s[sel]).min()) / max(span, 1e-6)
            if slope < k - slope_slack - prec:
                violations.append(
                    f"near-zero slope {slope:.3f} < {k - slope_slack:.3f}")

        rows.append(StructuralRow(k, l, True, leakage, precision, slope,
                                  tuple(violations)))
    return StructuralReport(tuple(rows))


def _odd_leakage(rr: np.ndarray, ss: np.ndarray, k: int, noise: float):
    """Identifiable odd-power content of r^{-k} s(r), relative to its size,
    plus the measurement precision set by the sample noise.

    Measured as the residual drop when odd powers of r are added to the even
    model: leakage^2 = (|resid_even|^2 - |resid_full|^2) / |g|^2.  On an
    interval bounded away from 0 the parity columns are nearly collinear, so
    this is the well-posed part of the refit; coefficient-wise attribution
    is not.  Anything below the precision is indistinguishable from noise.
    """
    g = ss / rr ** k
    t = rr * rr
    a, b = float(t.min()), float(t.max())
    u = (2 * t - (a + b)) / (b - a)
    D = min(8, (len(rr) - 4) // 2)
    even_cols = np.polynomial.chebyshev.chebvander(u, D)
    odd_cols = even_cols * rr[:, None]
    full = np.hstack([even_cols, odd_cols])
    c_even, *_ = np.linalg.lstsq(even_cols, g, rcond=None)
    c_full, *_ = np.linalg.lstsq(full, g, rcond=None)
    res_even = float(np.sum(np.abs(even_cols @ c_even - g) ** 2))
    res_full = float(np.sum(np.abs(full @ c_full - g) ** 2))
    denom = float(np.sum(np.abs(g) ** 2))
    if denom == 0.0:
        return 0.0, 0.0
    leakage = math.sqrt(max(res_even - res_full, 0.0) / denom)
    g_noise = noise / rr ** k
    precision = 5.0 * math.sqrt((D + 1) / len(rr)) * math.sqrt(
        float(np.mean(g_noise ** 2)) / (denom / len(rr)))
    return leakage, precision


# ---------------------------------------------------------------------------
# decay estimation
# ---------------------------------------------------------------------------

def decay_estimate(exp: LFExpansion, tau: float | None = None,
                   window: tuple | None = None,
                   circle_points: int = 64) -> DecayEstimate:
    """Estimate rho and C in the bound |p_{k,l}(zeta)| <= C / rho^k for
    |zeta| <= tau^2 by log-linear regression of the measured circle maxima
    m_k over the upper half of the degree range.
    """
    if tau is None:
        tau = 0.5 * exp.R
    if not 0 < tau < exp.R:
        raise ValueError("tau must lie in (0, R)")
    if exp.K < 8:
        raise ValueError("decay estimation needs K >= 8")
    if window is None:
        window = (exp.K // 2, exp.K)
    k_lo, k_hi = window
    zeta = tau ** 2 * np.exp(2j * math.pi * np.arange(circle_points) / circle_points)

    m = np.zeros(exp.K + 1)
    reliable = np.zeros(exp.K + 1, dtype=bool)
    for k in range(exp.K + 1):
        worst = 0.0
        err = 0.0
        for l in range(1, harmonic_dim(k, exp.n) + 1):
            p = exp.profiles[(k, l)]
            if not p.populated:
                continue
            val = float(np.abs(p.eval_at(zeta)).max())
            if val > worst:
                worst, err = val, p.eval_error
        m[k] = worst
        reliable[k] = worst > 0.0 and err <= 0.2 * worst

    ks = np.array([k for k in range(k_lo, k_hi + 1) if m[k] > 1e-300 and reliable[k]])
    if ks.size < 3:
        return DecayEstimate(math.inf, tau, 1.0, window, None, band_limited=True)

    logs = np.log(m[ks])
    slope, intercept = np.polyfit(ks, logs, 1)
    pred = slope * ks + intercept
    ss_res = float(np.sum((logs - pred) ** 2))
    ss_tot = float(np.sum((logs - logs.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    rho_hat = math.exp(-slope)
    C_hat = math.exp(intercept)
    if rho_hat <= tau:
        raise ValueError(
            f"estimated decay radius {rho_hat:.4g} does not exceed tau={tau:.4g}; "
            "the extension criterion fails at this tau")
    return DecayEstimate(rho_hat, tau, C_hat, window, r2)


def cauchy_profile_bound(max_circle: float, rho: float, k: int, m: int,
                         omega: float) -> float:
    """sqrt(omega) * max_circle * (k+m)! / rho^(k+m): a priori bound on the
    (k+m)-th derivative of a coefficient at 0 from its values on |zeta| = rho."""
    if not rho > 0:
        raise ValueError("rho must be positive")
    return math.sqrt(omega) * max_circle * math.factorial(k + m) / rho ** (m + k)
