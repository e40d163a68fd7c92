"""Deterministic quadrature helpers for bubble-weighted integrals.

The workhorse is a radial-angular split: angular moments of monomials over
the unit sphere have an exact Gamma-function form, and the radial factor is
integrated with Gauss-Legendre nodes after the substitution r = tan(theta),
which maps [0, inf) onto [0, pi/2).  Node sets are fixed (256 points by
default) so every result is reproducible; there is no adaptivity.

A seeded Monte Carlo estimator (importance sampling from a heavy-tailed
multivariate-t) is provided purely to validate the deterministic oracle once.
"""

from __future__ import annotations

from functools import lru_cache
from math import gamma, pi, atan

import numpy as np

from . import kernels

__all__ = [
    "gauss_legendre",
    "sphere_area",
    "surface_monomial_integral",
    "radial_weight_integral",
    "weighted_poly_integral",
    "sphere_nodes",
    "sphere_average",
    "ball_integral",
    "monte_carlo_weighted_integral",
]

DEFAULT_RADIAL_NODES = 256


@lru_cache(maxsize=None)
def gauss_legendre(count):
    """Nodes/weights on [-1, 1], cached."""
    x, w = np.polynomial.legendre.leggauss(count)
    return x, w


def _mapped_nodes(a, b, count):
    x, w = gauss_legendre(count)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def sphere_area(n):
    """Surface measure of the unit sphere in R^n."""
    return 2.0 * pi ** (n / 2.0) / gamma(n / 2.0)


def surface_monomial_integral(n, alpha):
    """Integral of y^alpha over the unit sphere in R^n (exact Gamma form).

    Zero whenever any exponent is odd.
    """
    if len(alpha) != n:
        raise ValueError(f"alpha length {len(alpha)} != n = {n}")
    if any(a % 2 for a in alpha):
        return 0.0
    num = 2.0
    for a in alpha:
        num *= gamma((a + 1) / 2.0)
    return num / gamma((sum(alpha) + n) / 2.0)


def radial_weight_integral(n, degree, upper=None, nodes=DEFAULT_RADIAL_NODES):
    """integral_0^upper r^(degree + n - 1) (1 + r^2)^(-n) dr, upper=None
    meaning infinity.  Requires degree <= n - 1 when upper is None."""
    if upper is None and degree >= n:
        raise ValueError("radial integral diverges for degree >= n")
    theta_max = pi / 2.0 if upper is None else atan(upper)
    theta, w = _mapped_nodes(0.0, theta_max, nodes)
    s, c = np.sin(theta), np.cos(theta)
    # r = tan(theta); integrand collapses to sin^(deg+n-1) * cos^(n-deg-1)
    return float((s ** (degree + n - 1) * c ** (n - degree - 1) * w).sum())


def weighted_poly_integral(poly, upper=None, nodes=DEFAULT_RADIAL_NODES):
    """integral of poly(y) * (1 + |y|^2)^(-n) over R^n (or the ball of radius
    ``upper``), via exact angular moments and Gauss-Legendre radial factors.

    This is the quadrature oracle against which the closed-form moment
    calculus is validated; it deliberately shares no code with it beyond the
    surface-moment formula.
    """
    n = poly.dimension
    total = 0.0
    radial_cache = {}
    for alpha, coeff in poly.sorted_terms():
        ang = surface_monomial_integral(n, alpha)
        if ang == 0.0:
            continue
        d = sum(alpha)
        if d not in radial_cache:
            radial_cache[d] = radial_weight_integral(n, d, upper, nodes)
        total += float(coeff) * ang * radial_cache[d]
    return total


def sphere_nodes(n, count, seed=0):
    """Quasi-uniform unit-sphere points: seeded Gaussian directions with
    antithetic pairs, so odd functions average to exactly zero."""
    rng = np.random.default_rng(seed)
    half = (count + 1) // 2
    g = rng.standard_normal((half, n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return np.concatenate([g, -g], axis=0)


def sphere_average(func, n, center, radius, count=2048, seed=0):
    """Average of func over the sphere |y - center| = radius (equal-weight
    nodes from sphere_nodes)."""
    nodes = sphere_nodes(n, count, seed)
    pts = np.asarray(center, dtype=float)[None, :] + radius * nodes
    return float(np.mean(func(pts)))


def ball_integral(func, n, radius, radial_nodes=96, sphere_count=2048, seed=0):
    """integral of func over the ball B_0(radius): Gauss-Legendre shells times
    sphere averages."""
    r, w = _mapped_nodes(0.0, radius, radial_nodes)
    area = sphere_area(n)
    total = 0.0
    nodes = sphere_nodes(n, sphere_count, seed)
    for ri, wi in zip(r, w):
        vals = func(ri * nodes)
        total += wi * ri ** (n - 1) * area * float(np.mean(vals))
    return total


def monte_carlo_weighted_integral(poly, samples=10_000_000, seed=0, chunk=1_000_000):
    """Seeded importance-sampling estimate of the bubble-weighted integral of
    ``poly`` plus its standard error.

    Samples come from a multivariate-t with one degree of freedom, whose
    tails are heavy enough that the estimator has finite variance for every
    degree the closed form accepts.  Used once, to validate the deterministic
    oracle; not part of any production path.
    """
    n = poly.dimension
    rng = np.random.default_rng(seed)
    exps, coeffs = kernels.poly_arrays(poly)
    nu = 1.0
    log_norm = (
        np.log(gamma((nu + n) / 2.0))
        - np.log(gamma(nu / 2.0))
        - 0.5 * n * np.log(nu * pi)
    )
    total = 0.0
    total_sq = 0.0
    drawn = 0
    while drawn < samples:
        m = min(chunk, samples - drawn)
        g = rng.standard_normal((m, n))
        s = rng.chisquare(nu, m)
        y = g * np.sqrt(nu / s)[:, None]
        r2 = (y * y).sum(axis=1)
        log_p = log_norm - 0.5 * (nu + n) * np.log1p(r2 / nu)
        vals = kernels.eval_poly(y, exps, coeffs)
        w = vals * np.exp(-n * np.log1p(r2) - log_p)
        total += float(w.sum())
        total_sq += float((w * w).sum())
        drawn += m
    mean = total / drawn
    var = max(total_sq / drawn - mean * mean, 0.0)
    return mean, (var / drawn) ** 0.5
