"""Sparse multivariate polynomials stored as multi-index -> coefficient dicts.

A polynomial in n variables is a dict mapping exponent tuples of length n to
coefficients.  Coefficients may be int, Fraction, float or complex; all
operations are coefficient-type agnostic.  Zero coefficients are never stored.
"""

from __future__ import annotations

from math import gcd

import numpy as np


def degree(terms):
    """Total degree, or -1 for the zero polynomial."""
    return max((sum(a) for a in terms), default=-1)


def poly_add(p, q):
    out = dict(p)
    for alpha, c in q.items():
        acc = out.get(alpha, 0) + c
        if acc == 0:
            out.pop(alpha, None)
        else:
            out[alpha] = acc
    return out


def poly_scale(p, c):
    if c == 0:
        return {}
    return {alpha: c * v for alpha, v in p.items()}


def poly_mul(p, q):
    out = {}
    for a, ca in p.items():
        for b, cb in q.items():
            key = tuple(x + y for x, y in zip(a, b))
            acc = out.get(key, 0) + ca * cb
            if acc == 0:
                out.pop(key, None)
            else:
                out[key] = acc
    return out


def q_poly(n, one=1):
    """x_1^2 + ... + x_n^2 with coefficient `one` (controls coefficient type)."""
    return {tuple(2 if i == j else 0 for i in range(n)): one for j in range(n)}


def laplacian(terms, n):
    out = {}
    for alpha, c in terms.items():
        for i in range(n):
            a = alpha[i]
            if a >= 2:
                key = alpha[:i] + (a - 2,) + alpha[i + 1:]
                acc = out.get(key, 0) + c * a * (a - 1)
                if acc == 0:
                    out.pop(key, None)
                else:
                    out[key] = acc
    return out


def gradient(terms, n):
    """List of n partial derivatives."""
    grads = [{} for _ in range(n)]
    for alpha, c in terms.items():
        for i in range(n):
            a = alpha[i]
            if a >= 1:
                key = alpha[:i] + (a - 1,) + alpha[i + 1:]
                grads[i][key] = grads[i].get(key, 0) + c * a
    return grads


def homogeneous_parts(terms):
    """Split by total degree; returns {degree: terms} with exact coefficients."""
    parts = {}
    for alpha, c in terms.items():
        parts.setdefault(sum(alpha), {})[alpha] = c
    return parts


def divide_by_q(terms, n):
    """Exact quotient terms / (x_1^2+...+x_n^2); raises if not divisible.

    Reduction happens on the lexicographically largest remaining monomial,
    which for a multiple of q always carries exponent >= 2 in the first
    variable, so each step strictly lowers the leading monomial.
    """
    rem = dict(terms)
    quot = {}
    q = q_poly(n)
    while rem:
        alpha = max(rem)
        if alpha[0] < 2:
            raise ValueError("polynomial is not divisible by |x|^2")
        c = rem[alpha]
        beta = (alpha[0] - 2,) + alpha[1:]
        quot[beta] = quot.get(beta, 0) + c
        rem = poly_add(rem, poly_scale(q, -c))
    return quot


def primitive_integer(terms):
    """Rescale a Fraction/int polynomial to coprime ints with lex-max term > 0."""
    if not terms:
        return {}
    lcm = 1
    for c in terms.values():
        d = getattr(c, "denominator", 1)
        lcm = lcm * d // gcd(lcm, d)
    ints = {a: int(c * lcm) for a, c in terms.items()}
    g = 0
    for c in ints.values():
        g = gcd(g, abs(c))
    if ints[max(ints)] < 0:
        g = -g
    return {a: c // g for a, c in ints.items()}


def eval_terms(terms, points, n):
    """Evaluate at an (m, n) array of real or complex points; returns (m,) array.

    Powers of each coordinate are cached, so the cost is one vector multiply
    per (term, variable) pair.
    """
    pts = np.asarray(points)
    single = pts.ndim == 1
    if single:
        pts = pts.reshape(1, -1)
    if pts.shape[1] != n:
        raise ValueError(f"points have dimension {pts.shape[1]}, expected {n}")
    m = pts.shape[0]
    cplx = np.iscomplexobj(pts) or any(isinstance(c, complex) for c in terms.values())
    dtype = complex if cplx else float
    pows = [{} for _ in range(n)]

    def power(i, e):
        cache = pows[i]
        if e not in cache:
            cache[e] = pts[:, i].astype(dtype) ** e
        return cache[e]

    total = np.zeros(m, dtype=dtype)
    for alpha, c in sorted(terms.items()):
        term = np.full(m, complex(c) if cplx else float(c), dtype=dtype)
        for i, e in enumerate(alpha):
            if e:
                term = term * power(i, e)
        total += term
    if single:
        return total[0]
    return total
