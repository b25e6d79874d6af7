"""Orthonormal bases of homogeneous harmonic polynomials in n real variables.

Construction: monomial seeds x_1^{a} * (monomials in x_2..x_n) with a <= 1,
sorted lexicographically, are mapped to harmonic polynomials by the canonical
projection

    h = sum_j c_j |x|^{2j} Laplacian^j p,   c_0 = 1,
    c_{j+1} = -c_j / (2 (j+1) (2k + n - 2j - 4)),

carried out with integer coefficients (the denominators are cleared up
front).  Because the projection annihilates |x|^2-multiples and the chosen
seeds span the quotient of degree-k polynomials by them, the a_k projections
form a basis.  They are orthogonalized by Gram-Schmidt with exact rational
sphere inner products; members whose exponent parities differ are orthogonal
automatically, so the elimination runs inside each parity class.  Floating
point enters only in the final normalization, so every member is an exact
rational harmonic polynomial times one float scale factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import ResourceLimitError
from .multipoly import (eval_terms, laplacian, poly_add, poly_mul, poly_scale,
                        primitive_integer, q_poly)
from .special_functions import harmonic_dim, legendre_leading, legendre_nd, sphere_area
from .complex_geometry import ComplexPoint, abs_sq, q_of

MAX_DEGREE = 40
MAX_DIM = 8


@lru_cache(maxsize=None)
def _integral_rational(alpha: tuple) -> Fraction:
    """Rational part of the sphere integral of x^alpha; the omitted factor is
    pi^(n//2) and depends only on n = len(alpha)."""
    if any(a % 2 for a in alpha):
        return Fraction(0)
    n = len(alpha)
    beta = [a // 2 for a in alpha]
    num = Fraction(2)
    for b in beta:
        num *= Fraction(math.factorial(2 * b), 4 ** b * math.factorial(b))
    s = sum(beta)
    if n % 2 == 0:
        return num / math.factorial(s + n // 2 - 1)
    m = s + (n - 1) // 2
    return num * Fraction(4 ** m * math.factorial(m), math.factorial(2 * m))


def monomial_sphere_integral(alpha, n: int) -> float:
    """Integral of x^alpha over S^{n-1}; zero when any exponent is odd."""
    if n < 2:
        raise ValueError("dimension n must be >= 2")
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != n:
        raise ValueError("multi-index length must equal n")
    return float(_integral_rational(alpha)) * math.pi ** (n // 2)


def _monomials(total: int, nvars: int):
    """All exponent tuples of the given total degree, lexicographic order."""
    if nvars == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _monomials(total - first, nvars - 1):
            yield (first,) + rest


def _seed_indices(n: int, k: int) -> list:
    seeds = []
    for a in (0, 1):
        if k - a >= 0:
            seeds.extend((a,) + beta for beta in _monomials(k - a, n - 1))
    return sorted(seeds)


def harmonic_projection(terms: dict, n: int, k: int) -> dict:
    """Degree-k harmonic component of a homogeneous polynomial of degree k.

    Exact for rational (Fraction/int) coefficients; the remainder
    terms - harmonic_projection(terms) is divisible by |x|^2.
    """
    h = dict(terms)
    lap = terms
    c = Fraction(1)
    qp = q_poly(n)
    qpow = None
    for j in range(1, k // 2 + 1):
        lap = laplacian(lap, n)
        if not lap:
            break
        c = -c / (2 * j * (2 * k + n - 2 * j - 2))
        qpow = qp if qpow is None else poly_mul(qpow, qp)
        h = poly_add(h, poly_scale(poly_mul(qpow, lap), c))
    return h


def _project_harmonic(alpha: tuple, n: int, k: int) -> dict:
    """Integer-coefficient harmonic projection of the monomial x^alpha."""
    jmax = k // 2
    denoms = [1]
    for i in range(1, jmax + 1):
        denoms.append(denoms[-1] * 2 * i * (2 * k + n - 2 * i - 2))
    scale = denoms[-1]
    h = {alpha: scale}
    lap = {alpha: 1}
    qp = q_poly(n)
    qpow = dict(qp)
    for j in range(1, jmax + 1):
        lap = laplacian(lap, n)
        if not lap:
            break
        coeff = (-1) ** j * (scale // denoms[j])
        for a, c in poly_mul(qpow, lap).items():
            acc = h.get(a, 0) + coeff * c
            if acc == 0:
                h.pop(a, None)
            else:
                h[a] = acc
        if j < jmax:
            qpow = poly_mul(qpow, qp)
    return primitive_integer({a: Fraction(c) for a, c in h.items()})


@dataclass(frozen=True)
class HarmonicPoly:
    """Homogeneous harmonic polynomial, sparse multi-index -> float map."""

    n: int
    k: int
    terms: dict

    def eval_real(self, x):
        return eval_terms(self.terms, np.asarray(x, dtype=float), self.n)

    def eval_complex(self, z: ComplexPoint) -> complex:
        return complex(eval_terms(self.terms, z.to_complex(), self.n))

    def laplacian_residual(self) -> float:
        """Max Laplacian coefficient relative to the coefficient norm."""
        lap = laplacian(self.terms, self.n)
        scale = math.sqrt(sum(c * c for c in self.terms.values()))
        if not lap:
            return 0.0
        return max(abs(c) for c in lap.values()) / scale


@dataclass(frozen=True)
class HarmonicBasis:
    """Ordered orthonormal basis of the degree-k harmonics in n variables."""

    n: int
    k: int
    members: tuple
    exact_members: tuple = field(repr=False, default=())

    def __len__(self):
        return len(self.members)

    def eval_at(self, points) -> np.ndarray:
        """(a_k, m) matrix of member values at an (m, n) point array."""
        pts = np.asarray(points)
        if pts.ndim == 1:
            pts = pts.reshape(1, -1)
        dtype = complex if np.iscomplexobj(pts) else float
        m = pts.shape[0]
        cache = {}

        def power(i, e):
            key = (i, e)
            if key not in cache:
                cache[key] = pts[:, i].astype(dtype) ** e
            return cache[key]

        out = np.zeros((len(self.members), m), dtype=dtype)
        for row, member in enumerate(self.members):
            acc = np.zeros(m, dtype=dtype)
            for alpha, c in sorted(member.terms.items()):
                term = np.full(m, c, dtype=dtype)
                for i, e in enumerate(alpha):
                    if e:
                        term = term * power(i, e)
                acc += term
            out[row] = acc
        return out

    def gram_residual(self) -> float:
        """Max deviation of the exact-form Gram matrix from the identity."""
        worst = 0.0
        mem = self.members
        for i in range(len(mem)):
            for j in range(i, len(mem)):
                ip = 0.0
                for a, ca in mem[i].terms.items():
                    for b, cb in mem[j].terms.items():
                        ip += ca * cb * monomial_sphere_integral(
                            tuple(x + y for x, y in zip(a, b)), self.n)
                worst = max(worst, abs(ip - (1.0 if i == j else 0.0)))
        return worst


def _orthogonalize_class(vectors: list, n: int) -> list:
    """Gram-Schmidt over one parity class; exact rational arithmetic.

    Input and output vectors are primitive integer dicts; output vectors are
    pairwise orthogonal under the sphere inner product.
    """
    support = sorted({a for v in vectors for a in v})
    index = {a: i for i, a in enumerate(support)}
    s = len(support)
    gram = [[None] * s for _ in range(s)]
    for i, a in enumerate(support):
        for j in range(i, s):
            val = _integral_rational(tuple(x + y for x, y in zip(a, support[j])))
            gram[i][j] = val
            gram[j][i] = val

    def dense(v):
        out = [Fraction(0)] * s
        for a, c in v.items():
            out[index[a]] = Fraction(c)
        return out

    ortho = []
    duals = []
    norms = []
    for v in vectors:
        w = dense(v)
        for u, du, nu in zip(ortho, duals, norms):
            c = sum(wi * di for wi, di in zip(w, du) if wi)
            if c:
                c /= nu
                w = [wi - c * ui for wi, ui in zip(w, u)]
        prim = primitive_integer({a: w[index[a]] for a in support if w[index[a]]})
        u = dense(prim)
        du = [sum(gram[i][j] * u[j] for j in range(s) if u[j]) for i in range(s)]
        nu = sum(ui * di for ui, di in zip(u, du) if ui)
        if nu <= 0:
            raise RuntimeError("degenerate seed system")
        ortho.append(u)
        duals.append(du)
        norms.append(nu)
    out = []
    for u, nu in zip(ortho, norms):
        out.append(({support[i]: int(c) for i, c in enumerate(u) if c}, nu))
    return out


@lru_cache(maxsize=None)
def build_basis(n: int, k: int) -> HarmonicBasis:
    """Deterministic orthonormal basis of degree-k harmonics in n variables."""
    if n < 2:
        raise ValueError("dimension n must be >= 2")
    if k < 0:
        raise ValueError("degree k must be >= 0")
    if k > MAX_DEGREE or n > MAX_DIM:
        raise ResourceLimitError(
            f"basis construction capped at k <= {MAX_DEGREE}, n <= {MAX_DIM} "
            f"(requested n={n}, k={k})")
    seeds = _seed_indices(n, k)
    projected = [(alpha, _project_harmonic(alpha, n, k)) for alpha in seeds]

    by_class = {}
    for pos, (alpha, h) in enumerate(projected):
        parity = tuple(a % 2 for a in alpha)
        by_class.setdefault(parity, []).append((pos, h))

    pi_pow = math.pi ** (n // 2)
    slots = [None] * len(seeds)
    exact = [None] * len(seeds)
    for parity, entries in by_class.items():
        ortho = _orthogonalize_class([h for _, h in entries], n)
        for (pos, _), (terms, norm_rat) in zip(entries, ortho):
            scale = 1.0 / math.sqrt(float(norm_rat) * pi_pow)
            slots[pos] = HarmonicPoly(
                n, k, {a: c * scale for a, c in sorted(terms.items())})
            exact[pos] = terms

    count = harmonic_dim(k, n)
    if len(slots) != count:
        raise RuntimeError(f"basis size {len(slots)} != harmonic dimension {count}")
    return HarmonicBasis(n, k, tuple(slots), tuple(exact))


def eval_complex(p: HarmonicPoly, z: ComplexPoint) -> complex:
    """Value of p at a complex point (plain polynomial evaluation)."""
    if z.n != p.n:
        raise ValueError(f"point dimension {z.n} != polynomial dimension {p.n}")
    return p.eval_complex(z)


def addition_residual(n: int, k: int, x: ComplexPoint, y: ComplexPoint) -> float:
    """|sum_l Y_l(x) Y_l(y) - |x|^k |y|^k (a_k/omega) P_k^n(<x^,y^>)| for real x, y."""
    for p in (x, y):
        if np.any(p.im != 0.0):
            raise ValueError("addition_residual takes real points")
    rx = math.sqrt(float(x.re @ x.re))
    ry = math.sqrt(float(y.re @ y.re))
    if rx == 0.0 or ry == 0.0:
        raise ValueError("points must be nonzero")
    basis = build_basis(n, k)
    vals = basis.eval_at(np.vstack([x.re, y.re]))
    lhs = float(np.real(vals[:, 0] @ vals[:, 1]))
    cos = float(x.re @ y.re) / (rx * ry)
    rhs = (rx ** k * ry ** k * harmonic_dim(k, n) / sphere_area(n)
           * legendre_nd(k, n, cos))
    return abs(lhs - rhs)


def norm_sum_complex(n: int, k: int, z: ComplexPoint) -> float:
    """sum_l |Y_l(z)|^2 by direct evaluation."""
    basis = build_basis(n, k)
    vals = basis.eval_at(z.to_complex().reshape(1, -1))
    return float(np.sum(np.abs(vals[:, 0]) ** 2))


Q_ZERO_RTOL = 1e-8


def norm_sum_identity(n: int, k: int, z: ComplexPoint) -> float:
    """Closed form for sum_l |Y_l(z)|^2: (a_k/omega) |q|^k P_k^n(|z|^2/|q|),
    switching to the leading-coefficient branch (a_k/omega) d_k |z|^{2k} when
    |q(z)| <= 1e-8 |z|^2 (the generic form has a 0/0 there)."""
    s = abs_sq(z)
    aq = abs(q_of(z))
    ratio = harmonic_dim(k, n) / sphere_area(n)
    if aq <= Q_ZERO_RTOL * s:
        return ratio * legendre_leading(k, n) * s ** k
    return ratio * aq ** k * legendre_nd(k, n, s / aq)
