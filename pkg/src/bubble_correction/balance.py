"""Non-degeneracy and balance constraints at simple concentration points.

Two kinds of checks live here.  Local ones interrogate a single Taylor
polynomial: the two-sided gradient bound on the unit sphere, the drift
moment map and its zero search, and the vanishing constraints that a drift
direction must satisfy.  Global ones couple several concentration points:
the exponent interference condition and the weighted balance sums over
groups of equal drift exponents.

Algebraic residuals (polynomial values, pairings, rational multiples of the
normalizing integral) are computed exactly and must vanish exactly to pass;
float tolerances apply only where genuine floats enter (fractional powers,
quadrature).  Default tolerances: 1e-10 relative for mixed float sums and
1e-4 for quadrature-backed identities.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels, quadrature
from .errors import UnsupportedCaseError
from .moments import (
    ShiftExpansion,
    gradient_moment,
    j_multiple,
)
from .polynomials import (
    Polynomial,
    as_coefficient,
    directional_pairing,
    gradient,
    iterated_laplacian,
)

__all__ = [
    "ViolationReport",
    "BlowupConfiguration",
    "gradient_lower_bound",
    "parity_certificate",
    "FalsifierResult",
    "flexibility_falsifier",
    "eta_admissible",
    "single_point_constraints",
    "interference_check",
    "multi_point_balance",
    "pohozaev_volume_vs_surface",
]

TOL_FLOAT = 1e-10
TOL_QUAD = 1e-4


@dataclass(frozen=True)
class ViolationReport:
    """One checked constraint: exact residual when available, float residual
    always, and the verdict at the stated tolerance."""

    constraint: str
    residual_float: float
    passed: bool
    residual_exact: Fraction | None = None
    details: dict = field(default_factory=dict)

    def to_json(self):
        data = {
            "constraint": self.constraint,
            "residual_float": self.residual_float,
            "pass": self.passed,
        }
        if self.residual_exact is not None:
            data["residual_exact"] = {
                "num": str(self.residual_exact.numerator),
                "den": str(self.residual_exact.denominator),
            }
        else:
            data["residual_exact"] = None
        if self.details:
            data["details"] = self.details
        return data


def _parse_rational(value):
    if isinstance(value, dict):
        return Fraction(int(value["num"]), int(value["den"]))
    return as_coefficient(value)


@dataclass(frozen=True)
class BlowupConfiguration:
    """Concentration points with their local data.

    points: the locations, the first of which must be the origin; k_values:
    positive curvature scales c~ * K at the points (the origin is pinned to
    n(n-2)); taylor_polys: homogeneous degree-(n-2) polynomials attached to
    each point; flex_vectors / flex_exponents: drift direction and rate per
    point; scale_ratios: relative concentration scales, 1 at the origin.
    """

    n: int
    points: tuple
    k_values: tuple
    taylor_polys: tuple
    flex_vectors: tuple
    flex_exponents: tuple
    scale_ratios: tuple

    def __post_init__(self):
        counts = {
            len(self.points),
            len(self.k_values),
            len(self.taylor_polys),
            len(self.flex_vectors),
            len(self.flex_exponents),
            len(self.scale_ratios),
        }
        if len(counts) != 1:
            raise ValueError("all per-point lists must have equal length")
        if any(x != 0 for x in self.points[0]):
            raise ValueError("the first point must be the origin")
        if len({tuple(p) for p in self.points}) != len(self.points):
            raise ValueError("points must be pairwise distinct")
        if any(k <= 0 for k in self.k_values):
            raise ValueError("curvature scales must be positive")
        if self.scale_ratios[0] != 1:
            raise ValueError("the origin's scale ratio must be 1")
        for poly in self.taylor_polys:
            if poly.dimension != self.n:
                raise ValueError("taylor polynomial dimension mismatch")
            if not poly.is_homogeneous() or (
                not poly.is_zero and poly.degree() != self.n - 2
            ):
                raise ValueError(
                    "taylor polynomials must be homogeneous of degree n - 2"
                )

    @classmethod
    def from_json(cls, data):
        n = int(data["n"])
        return cls(
            n=n,
            points=tuple(
                tuple(_parse_rational(x) for x in p) for p in data["points"]
            ),
            k_values=tuple(_parse_rational(k) for k in data["k_values"]),
            taylor_polys=tuple(
                Polynomial.from_json(p) for p in data["taylor_polys"]
            ),
            flex_vectors=tuple(
                tuple(_parse_rational(x) for x in v) for v in data["flex_vectors"]
            ),
            flex_exponents=tuple(
                _parse_rational(e) for e in data["flex_exponents"]
            ),
            scale_ratios=tuple(_parse_rational(s) for s in data["scale_ratios"]),
        )

    def to_json(self):
        def rat(x):
            f = Fraction(x)
            return {"num": str(f.numerator), "den": str(f.denominator)}

        return {
            "n": self.n,
            "points": [[rat(x) for x in p] for p in self.points],
            "k_values": [rat(k) for k in self.k_values],
            "taylor_polys": [p.to_json() for p in self.taylor_polys],
            "flex_vectors": [[rat(x) for x in v] for v in self.flex_vectors],
            "flex_exponents": [rat(e) for e in self.flex_exponents],
            "scale_ratios": [rat(s) for s in self.scale_ratios],
        }


# ------------------------------------------------------------- local checks


def gradient_lower_bound(poly, rho=1.0, samples=10_000, seed=0):
    """Sampled two-sided gradient bound constants on the unit sphere.

    By homogeneity |grad P(y)| / |y|^(deg-1) equals |grad P| on the sphere,
    so the returned (min, max) estimate the sharp constants; the lower bound
    condition holds iff min > 0, which is reported, never assumed.  ``rho``
    only rescales the reported constants to the ball of that radius.
    """
    n = poly.dimension
    ell = poly.degree()
    if ell is None or ell < 2:
        raise ValueError("needs a polynomial of degree >= 2")
    nodes = quadrature.sphere_nodes(n, samples, seed)
    grads = gradient(poly)
    norms_sq = np.zeros(len(nodes))
    for g in grads:
        if not g.is_zero:
            exps, coeffs = kernels.poly_arrays(g)
            vals = kernels.eval_poly(nodes, exps, coeffs)
            norms_sq += vals * vals
    norms = np.sqrt(norms_sq)
    scale = float(rho) ** (ell - 1)
    return float(norms.min()) * scale, float(norms.max()) * scale


def parity_certificate(poly):
    """Prove the nonvanishing of the drift moment map for the separable
    even-power class P = sum_j c_j y_j^ell (ell even, every c_j nonzero).

    For such P, component j of the moment map at drift X is c_j * ell * X_j
    times a positive even series in X_j, so the map vanishes only at X = 0.
    Returns True when poly belongs to the class (certificate valid), False
    otherwise (no conclusion).
    """
    n = poly.dimension
    ell = poly.degree()
    if ell is None or ell % 2 or ell < 2:
        return False
    seen = set()
    for alpha, _coeff in poly.terms.items():
        active = [i for i, a in enumerate(alpha) if a]
        if len(active) != 1 or alpha[active[0]] != ell:
            return False
        seen.add(active[0])
    if seen != set(range(n)):
        return False
    # positivity of the even series: every coefficient is a binomial times a
    # strictly positive even moment, checked exactly
    for m in range(0, ell - 1, 2):
        if j_multiple(Polynomial.variable(n, 0, m) if m else Polynomial.constant(n, 1)) <= 0:
            return False
    return True


@dataclass(frozen=True)
class FalsifierResult:
    """Outcome of the drift-moment zero search."""

    counterexample: np.ndarray | None
    certificate_proven: bool
    min_residual: float
    evaluations: int

    @property
    def nonvanishing_proven(self):
        return self.certificate_proven and self.counterexample is None


def flexibility_falsifier(poly, budget=2000, seed=0, tol=1e-8):
    """Search for a nonzero drift X at which the moment map of grad(P)
    vanishes.

    Grid seeding plus a deterministic shrinking pattern search.  Finding a
    counterexample disproves the nonvanishing condition; not finding one is
    NOT a proof.  For the separable even-power class the parity certificate
    is run as well, and that one IS a proof.
    """
    n = poly.dimension
    certificate = parity_certificate(poly)
    if poly.is_zero:
        x = np.zeros(n)
        x[0] = 1.0
        return FalsifierResult(
            counterexample=x,
            certificate_proven=False,
            min_residual=0.0,
            evaluations=1,
        )

    def residual(x):
        vec = gradient_moment(poly, [Fraction(v) for v in x])
        return float(np.linalg.norm(vec))

    rng = np.random.default_rng(seed)
    evaluations = 0
    candidates = []
    for i in range(n):
        for s in (1.0, -1.0):
            x = np.zeros(n)
            x[i] = s
            candidates.append(x)
    grid_budget = max(budget // 4 - len(candidates), 0)
    if grid_budget:
        extra = rng.uniform(-2.0, 2.0, size=(grid_budget, n))
        keep = np.linalg.norm(extra, axis=1) > 0.1
        candidates.extend(extra[keep])

    best_x, best_r = None, np.inf
    for x in candidates:
        r = residual(x)
        evaluations += 1
        if r < best_r:
            best_x, best_r = np.array(x, dtype=float), r

    # shrinking coordinate pattern search around the best grid point
    step = 0.5
    while evaluations < budget and step > 1e-10 and best_r > tol / 10:
        improved = False
        for i in range(n):
            for s in (step, -step):
                trial = best_x.copy()
                trial[i] += s
                if np.linalg.norm(trial) < 0.05:
                    continue
                r = residual(trial)
                evaluations += 1
                if r < best_r:
                    best_x, best_r = trial, r
                    improved = True
        if not improved:
            step *= 0.5

    found = best_r < tol and np.linalg.norm(best_x) >= 0.05
    return FalsifierResult(
        counterexample=best_x if found else None,
        certificate_proven=certificate,
        min_residual=best_r,
        evaluations=evaluations,
    )


def eta_admissible(n, ell, eta):
    """Strict admissibility of a drift exponent.

    Degree n - 2: eta < 2 / (3n - 2).  Degree n - 3 (dimension > 6):
    eta < (n - 6) / ((n - 3)(3n - 2)).  Other degrees are unsupported.
    """
    eta = Fraction(eta)
    if ell == n - 2:
        bound = Fraction(2, 3 * n - 2)
    elif ell == n - 3:
        if n <= 6:
            raise UnsupportedCaseError(
                "degree n - 3 requires dimension > 6"
            )
        bound = Fraction(n - 6, (n - 3) * (3 * n - 2))
    else:
        raise UnsupportedCaseError(
            f"admissibility bounds cover degrees n - 2 and n - 3 only "
            f"(got n={n}, ell={ell})"
        )
    return eta < bound


def single_point_constraints(poly, point):
    """Necessary vanishing constraints on a drift direction X at one
    concentration point: the Taylor polynomial must vanish at X and every
    intermediate shift moment must vanish.  All residuals are exact.

    Hypothesis violations (wrong degree, nonvanishing top Laplacian) are
    reported as extra entries but do not stop the checks.
    """
    n = poly.dimension
    ell = poly.degree()
    point = [as_coefficient(x) for x in point]
    reports = []

    if ell not in (n - 2, n - 3):
        reports.append(
            ViolationReport(
                constraint="hypothesis:degree",
                residual_float=float("nan"),
                passed=False,
                details={"degree": ell, "expected": [n - 2, n - 3]},
            )
        )
    top = iterated_laplacian(poly, (ell or 0) // 2)
    if not top.is_zero:
        reports.append(
            ViolationReport(
                constraint="hypothesis:top_laplacian_vanishes",
                residual_float=float("nan"),
                passed=False,
            )
        )

    value = poly.evaluate(point)
    reports.append(
        ViolationReport(
            constraint="taylor_value_at_drift",
            residual_exact=value,
            residual_float=float(value),
            passed=value == 0,
        )
    )
    expansion = ShiftExpansion(poly)
    for h in range(1, ell):
        piece = expansion.term(h, point)
        mult = j_multiple(piece)
        reports.append(
            ViolationReport(
                constraint=f"shift_moment_order_{h}",
                residual_exact=mult,
                residual_float=float(mult),
                passed=mult == 0,
            )
        )
    return reports


# ------------------------------------------------------------ global checks


def interference_check(n, etas, distinct_only=False):
    """No-interference condition on drift exponents: (n - 3) * eta_m must
    differ from h * eta_j for every other point j and every natural
    h <= n - 3.  Evaluated over exact rationals.

    Equal exponents always interfere (h = n - 3 fires); that is the regime
    handled by the grouped balance sums, so ``distinct_only=True`` restricts
    the check to pairs with different exponents, which is the condition the
    single-point conclusions actually need.
    """
    if n <= 6:
        raise UnsupportedCaseError("interference condition needs dimension > 6")
    etas = [Fraction(e) for e in etas]
    violations = []
    for m, em in enumerate(etas):
        for j, ej in enumerate(etas):
            if j == m or (distinct_only and em == ej):
                continue
            for h in range(1, n - 2):
                if (n - 3) * em == h * ej:
                    violations.append({"m": m, "j": j, "h": h})
    return ViolationReport(
        constraint="exponent_interference",
        residual_float=float(len(violations)),
        passed=not violations,
        details={"violations": violations, "distinct_only": distinct_only},
    )


def _pairing_at(config, m):
    poly = config.taylor_polys[m]
    paired = directional_pairing(config.points[m], poly)
    return paired.evaluate([as_coefficient(x) for x in config.flex_vectors[m]])


def multi_point_balance(config, tol=TOL_FLOAT, tol_exact=0):
    """Weighted balance sums over groups of equal drift exponents.

    Each point contributes [n(n-2) / (c~ K)]^(n/2) * S^((n-3)(1+eta)) times
    the exact pairing of its location with the gradient of its Taylor
    polynomial at its drift vector; every group must sum to zero.  Rational
    factors stay exact whenever the powers are exact (even n, unit scale
    ratios); otherwise the group sum is a float compared at ``tol`` relative
    to the largest term.  ``tol_exact`` loosens the exact tier (default 0:
    exact sums must vanish identically).
    """
    n = config.n
    if n <= 6:
        raise UnsupportedCaseError("balance sums need dimension > 6")
    ctilde = Fraction(n - 2, 4 * (n - 1))

    groups = {}
    for m, eta in enumerate(config.flex_exponents):
        groups.setdefault(Fraction(eta), []).append(m)

    group_details = []
    worst = 0.0
    all_pass = True
    exact_zero = True
    for eta, members in sorted(groups.items()):
        terms_exact = []
        terms_float = []
        for m in members:
            pairing = _pairing_at(config, m)
            base = Fraction(n * (n - 2)) / (ctilde * Fraction(config.k_values[m]))
            s_ratio = Fraction(config.scale_ratios[m])
            exponent = Fraction(n - 3) * (1 + Fraction(eta))
            weight_exact = None
            if n % 2 == 0 and s_ratio == 1:
                weight_exact = base ** (n // 2)
            if weight_exact is not None:
                terms_exact.append(weight_exact * pairing)
                terms_float.append(float(weight_exact * pairing))
            else:
                weight = float(base) ** (n / 2.0) * float(s_ratio) ** float(exponent)
                terms_exact.append(None)
                terms_float.append(weight * float(pairing))
        if all(t is not None for t in terms_exact):
            total_exact = sum(terms_exact, Fraction(0))
            total = float(total_exact)
            passed = abs(total_exact) <= tol_exact
            if total_exact != 0:
                exact_zero = False
        else:
            total_exact = None
            total = sum(terms_float)
            scale = max((abs(t) for t in terms_float), default=0.0)
            passed = abs(total) <= tol * scale if scale else total == 0.0
            exact_zero = False
        residual = abs(total)
        worst = max(worst, residual)
        all_pass = all_pass and passed
        group_details.append(
            {
                "eta": {"num": str(Fraction(eta).numerator), "den": str(Fraction(eta).denominator)},
                "members": members,
                "sum": total,
                "exact": total_exact == 0 if total_exact is not None else None,
                "pass": passed,
            }
        )

    return ViolationReport(
        constraint="multi_point_balance",
        residual_float=worst,
        residual_exact=Fraction(0) if (all_pass and exact_zero) else None,
        passed=all_pass,
        details={"groups": group_details},
    )


# ----------------------------------------------------------------- balance law


def pohozaev_volume_vs_surface(
    profile,
    curvature,
    rho,
    radial_nodes=128,
    sphere_count=4096,
    angular_nodes=512,
    seed=0,
    tol=TOL_QUAD,
):
    """Compare the volume and flux sides of the balance law on the ball of
    radius rho.

    Volume side: the radial curvature pairing against the critical power of
    the profile.  Flux side: (1 / c~) * (2n / (n - 2)) times the surface
    integral of the normal component of the balance vector field built from
    the profile, its gradient, and the curvature.  For a profile that solves
    the equation exactly the two sides agree; the returned report carries
    both values and the verdict at ``tol`` relative (floored at 1e-6
    absolute so that an exactly-zero identity cannot false-fail).

    ``profile`` must expose values(points), gradients(points) and the
    ambient dimension / center; ``curvature`` must expose values(points) and
    radial_pairing(points) (the pairing of the position vector with its
    gradient).
    """
    n = profile.dimension
    ctilde = (n - 2) / (4.0 * (n - 1))
    p_crit = 2.0 * n / (n - 2.0)

    def volume_integrand(points):
        return curvature.radial_pairing(points) * profile.values(points) ** p_crit

    lhs = quadrature.ball_integral(
        volume_integrand,
        n,
        rho,
        radial_nodes=radial_nodes,
        sphere_count=sphere_count,
        seed=seed,
    )

    axis = getattr(profile, "center", None)
    if axis is not None and np.linalg.norm(axis) > 0:
        nodes, weights = _axial_sphere_nodes(n, np.asarray(axis, float), angular_nodes)
    else:
        nodes = quadrature.sphere_nodes(n, sphere_count, seed)
        weights = np.full(len(nodes), quadrature.sphere_area(n) / len(nodes))

    pts = rho * nodes
    v = profile.values(pts)
    grad = profile.gradients(pts)
    kv = curvature.values(pts)
    normal = nodes
    v_dot_n = (grad * normal).sum(axis=1)
    grad_sq = (grad * grad).sum(axis=1)
    y_dot_grad = rho * v_dot_n
    field_normal = (
        0.5 * (n - 2) * v * v_dot_n
        - 0.5 * grad_sq * rho
        + y_dot_grad * v_dot_n
        + (n - 2) / (2.0 * n) * ctilde * v**p_crit * kv * rho
    )
    flux = float((field_normal * weights).sum()) * rho ** (n - 1)
    rhs = (1.0 / ctilde) * p_crit * flux

    residual = abs(lhs - rhs)
    scale = max(abs(lhs), abs(rhs))
    passed = residual <= max(tol * scale, 1e-6)
    return ViolationReport(
        constraint="balance_volume_vs_surface",
        residual_float=residual,
        passed=passed,
        details={"volume_side": lhs, "flux_side": rhs},
    )


def _axial_sphere_nodes(n, axis, count):
    """Sphere nodes exploiting rotational symmetry around ``axis``: latitude
    circles with Gauss-Legendre weights; returns unit nodes and weights
    summing to the sphere area.  Exact for integrands depending only on the
    polar angle; a good deterministic set otherwise."""
    axis = axis / np.linalg.norm(axis)
    t, w = quadrature.gauss_legendre(count)  # t = cos(theta)
    # complete t to unit vectors in the plane spanned by axis and one
    # orthogonal direction, weighting each latitude by its measure
    ortho = np.zeros(n)
    ortho[np.argmin(np.abs(axis))] = 1.0
    ortho = ortho - axis * (ortho @ axis)
    ortho /= np.linalg.norm(ortho)
    s = np.sqrt(np.maximum(1.0 - t * t, 0.0))
    nodes = t[:, None] * axis[None, :] + s[:, None] * ortho[None, :]
    lat_area = quadrature.sphere_area(n - 1) * s ** (n - 3) if n > 2 else np.ones_like(s)
    weights = w * lat_area
    return nodes, weights
