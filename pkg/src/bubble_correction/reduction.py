"""Constructive polynomial solver for the linearized bubble equation.

The operator under study is

    L(G) = (1 + |y|^2) * lap(G) - 2n * (y . grad G) + 2n * G,

acting on polynomials in n variables.  Given a homogeneous source P of degree
ell whose top iterated Laplacian vanishes, ``solve_gamma`` produces the exact
polynomial solution of L(G) = P as a finite combination of the building
blocks (|y|^2)^j * lap^(k)(P).  The combination's coefficients C^j_k satisfy a
three-term recurrence whose cells are filled in an explicit dependency order
(same-degree diagonal first, then column by column in the offset k - j,
ascending j inside each column); each cell divides by a characteristic
denominator that is checked before use.

When the top iterated Laplacian does not vanish, L(G) = P picks up a purely
radial residue.  For even n and even ell <= n - 2 the residue can be absorbed
by an even radial polynomial of degree up to n (``radial_completion``), at
the price of losing uniqueness modulo the kernel of L.

Everything here is exact: solutions are verified by applying L and comparing
polynomials with ``==`` before they are returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    CharacteristicGuardError,
    ResidueObstructionError,
    UnsupportedCaseError,
)
from .polynomials import (
    Polynomial,
    euler_operator,
    iterated_laplacian,
    laplacian,
    r2_multiply,
)

__all__ = [
    "h_of",
    "a_multiplier",
    "characteristic_denominator",
    "characteristic_guard",
    "CoefficientTable",
    "coefficient_table",
    "apply_L",
    "CorrectionSolution",
    "solve_gamma",
    "residue_terms",
    "radial_completion",
    "solve_general",
    "project_to_admissible",
    "kernel_basis",
]


def h_of(ell):
    """Largest integer <= ell / 2."""
    if ell < 1:
        raise ValueError("degree must be >= 1")
    return ell // 2


def a_multiplier(n, ell, j, k):
    """The multiplier (2j)(2j + n - 2 + 2*ell - 4k) produced when the
    weighted Laplacian acts on (|y|^2)^j * lap^(k)(P)."""
    if j < 0 or k < 0:
        raise ValueError("indices must be non-negative")
    return Fraction(2 * j) * Fraction(2 * j + n - 2 + 2 * ell - 4 * k)


def characteristic_denominator(n, ell, j, k):
    """A_{ell,j,k} - 2n * (ell + 2(j - k) - 1), the cell's own multiplier
    under L.  Factors as -(2j - n)(2j - 2(ell - 1 - 2(k - j)))."""
    return a_multiplier(n, ell, j, k) - Fraction(2 * n) * Fraction(
        ell + 2 * (j - k) - 1
    )


def characteristic_guard(n, ell, j, k):
    """True when the cell (j, k) has a nonzero characteristic denominator."""
    if not (0 <= j <= k <= h_of(ell) - 1):
        raise ValueError(f"cell (j={j}, k={k}) outside the table range")
    return characteristic_denominator(n, ell, j, k) != 0


def _guard_root(n, ell, j, k):
    if 2 * j == n:
        return "half-dimension"
    if j == (ell - 1) - 2 * (k - j):
        return "degree"
    return "unknown"


@dataclass(frozen=True)
class CoefficientTable:
    """Recurrence coefficients C^j_k for 0 <= j <= k <= columns - 1, the
    multipliers A_{ell,j,k} on the same range, the build order with each
    cell's dependencies, and the residue weights a_0..a_h assembled from the
    last column (present only for full tables)."""

    n: int
    ell: int
    h: int
    columns: int
    C: dict
    A: dict
    build_order: tuple
    dependencies: dict
    residues: tuple

    def cell(self, j, k):
        return self.C[(j, k)]

    def to_json(self):
        cells = []
        for j, k in self.build_order:
            c = self.C[(j, k)]
            a = self.A[(j, k)]
            cells.append(
                {
                    "j": j,
                    "k": k,
                    "C": {"num": str(c.numerator), "den": str(c.denominator)},
                    "A": {"num": str(a.numerator), "den": str(a.denominator)},
                    "guard_ok": True,
                    "depends": [list(d) for d in self.dependencies[(j, k)]],
                }
            )
        data = {
            "n": self.n,
            "ell": self.ell,
            "h": self.h,
            "columns": self.columns,
            "cells": cells,
        }
        if self.residues is not None:
            data["residues"] = [
                {"num": str(a.numerator), "den": str(a.denominator)}
                for a in self.residues
            ]
        return data


def coefficient_table(n, ell, columns=None):
    """Build the coefficient table for dimension n and source degree ell.

    ``columns`` limits how many columns k = 0..columns-1 are materialized
    (used when an early iterated Laplacian vanishes); the default is the full
    table with h columns, which also carries the residue weights.

    Raises CharacteristicGuardError if any required denominator vanishes,
    naming the blocked cell and which root of the characteristic equation
    fired.
    """
    if ell < 2:
        raise UnsupportedCaseError("source degree must be >= 2")
    if n % 2 == 0 and ell >= n + 2:
        raise UnsupportedCaseError(
            f"even dimension requires ell < n + 2 (got n={n}, ell={ell})"
        )
    h = h_of(ell)
    full = columns is None
    columns = h if full else min(columns, h)

    C = {}
    A = {}
    build_order = []
    dependencies = {}
    # Column-by-column in the offset u = k - j (the diagonal first), ascending
    # j inside each column: every dependency of a cell then precedes it.
    for u in range(columns):
        for j in range(columns - u):
            k = j + u
            A[(j, k)] = a_multiplier(n, ell, j, k)
            denom = characteristic_denominator(n, ell, j, k)
            if denom == 0:
                raise CharacteristicGuardError(n, ell, j, k, _guard_root(n, ell, j, k))
            deps = [
                cell
                for cell in ((j - 1, k - 1), (j, k - 1), (j + 1, k))
                if 0 <= cell[0] <= cell[1] <= columns - 1 and cell != (j, k)
            ]
            for cell in deps:
                if cell not in C:
                    raise RuntimeError(
                        f"dependency cycle: cell {(j, k)} needs {cell} "
                        "before it is built"
                    )
            source = Fraction(1 if (j, k) == (0, 0) else 0)
            feed = sum(
                (
                    C[(j - 1, k - 1)] if (j - 1, k - 1) in C and j >= 1 else Fraction(0),
                    C[(j, k - 1)] if (j, k - 1) in C else Fraction(0),
                    (C[(j + 1, k)] * a_multiplier(n, ell, j + 1, k))
                    if (j + 1, k) in C
                    else Fraction(0),
                ),
                Fraction(0),
            )
            C[(j, k)] = (source - feed) / denom
            build_order.append((j, k))
            dependencies[(j, k)] = tuple(deps)

    residues = None
    if full:
        last = h - 1
        a = [Fraction(0)] * (h + 1)
        a[h] = C[(last, last)]
        for m in range(1, h):
            a[m] = C[(m, last)] + C[(m - 1, last)]
        a[0] = C[(0, last)]
        residues = tuple(a)

    return CoefficientTable(
        n=n,
        ell=ell,
        h=h,
        columns=columns,
        C=C,
        A=A,
        build_order=tuple(build_order),
        dependencies=dependencies,
        residues=residues,
    )


def apply_L(poly):
    """(1 + |y|^2) * lap(G) - 2n * (y . grad G) + 2n * G, exactly."""
    n = poly.dimension
    lap = laplacian(poly)
    weighted = lap + Polynomial.r_squared(n) * lap
    return weighted - 2 * n * euler_operator(poly) + 2 * n * poly


@dataclass(frozen=True)
class CorrectionSolution:
    """A verified polynomial solution of L(G) = P.

    ``gamma`` alone solves when ``radial_completion`` is None; otherwise
    gamma + radial_completion solves.  ``vanishing_order`` is the smallest k
    with lap^(k)(P) identically zero (h + 1 when none at or below h).
    ``unique_mod_kernel`` reflects that adding the radial completion forfeits
    uniqueness modulo the kernel of L.
    """

    gamma: Polynomial
    radial_completion: Polynomial | None
    vanishing_order: int
    verified: bool
    n: int
    ell: int

    @property
    def unique_mod_kernel(self):
        return self.radial_completion is None and self.ell < self.n

    def total(self):
        if self.radial_completion is None:
            return self.gamma
        return self.gamma + self.radial_completion

    def to_json(self):
        return {
            "gamma": self.gamma.to_json(),
            "radial_completion": (
                None
                if self.radial_completion is None
                else self.radial_completion.to_json()
            ),
            "vanishing_order": self.vanishing_order,
            "verified": self.verified,
            "n": self.n,
            "ell": self.ell,
        }

    @classmethod
    def from_json(cls, data):
        return cls(
            gamma=Polynomial.from_json(data["gamma"]),
            radial_completion=(
                None
                if data.get("radial_completion") is None
                else Polynomial.from_json(data["radial_completion"])
            ),
            vanishing_order=int(data["vanishing_order"]),
            verified=bool(data["verified"]),
            n=int(data["n"]),
            ell=int(data["ell"]),
        )


def _validated_source(poly):
    if poly.is_zero or not poly.is_homogeneous():
        raise UnsupportedCaseError("source must be a nonzero homogeneous polynomial")
    ell = poly.degree()
    if ell < 2:
        raise UnsupportedCaseError(
            "degree-1 sources are outside the construction; see the kernel "
            "basis for degree <= 1 behaviour"
        )
    return ell


def _laplacian_chain(poly, h):
    """[P, lap P, ..., lap^h P]."""
    chain = [poly]
    for _ in range(h):
        chain.append(laplacian(chain[-1]))
    return chain


def residue_terms(poly):
    """The radial leftover [lap^h P] * sum_k a_k (|y|^2)^k that L produces on
    the full combination; identically zero exactly when lap^h P vanishes."""
    ell = _validated_source(poly)
    n = poly.dimension
    h = h_of(ell)
    top = iterated_laplacian(poly, h)
    if top.is_zero:
        return Polynomial.zero(n)
    table = coefficient_table(n, ell)
    radial = Polynomial.zero(n)
    for k, a in enumerate(table.residues):
        if a:
            radial = radial + a * (Polynomial.r_squared(n) ** k)
    return top * radial


def _combination(poly, chain, table, columns):
    n = poly.dimension
    out = Polynomial.zero(n)
    for (j, k), c in table.C.items():
        if k >= columns:
            continue
        if chain[k].is_zero:
            continue
        out = out + c * r2_multiply(chain[k], j)
    return out


def solve_gamma(poly):
    """Exact polynomial solution of L(G) = P for homogeneous P of degree >= 2
    with vanishing top iterated Laplacian.

    Raises ResidueObstructionError (carrying the residue polynomial) when the
    top iterated Laplacian does not vanish; the caller may route such inputs
    to ``solve_general``.
    """
    ell = _validated_source(poly)
    n = poly.dimension
    h = h_of(ell)
    chain = _laplacian_chain(poly, h)
    vanishing = next((k for k in range(1, h + 1) if chain[k].is_zero), h + 1)
    if not chain[h].is_zero:
        raise ResidueObstructionError(
            f"top iterated Laplacian (order {h}) does not vanish; "
            "no pure polynomial solution of this form exists",
            residue=residue_terms(poly),
            top_laplacian=chain[h],
        )
    columns = min(h, vanishing)
    table = coefficient_table(n, ell, columns=columns)
    gamma = _combination(poly, chain, table, columns)

    if apply_L(gamma) != poly:
        raise AssertionError("construction failed exact verification")
    if gamma.constant_term():
        raise AssertionError("solution unexpectedly contains a constant term")
    if any(sum(alpha) == 1 for alpha in gamma.terms):
        raise AssertionError("solution unexpectedly contains linear terms")
    if gamma.degree() is not None and gamma.degree() > ell:
        raise AssertionError("solution degree exceeds the source degree")

    return CorrectionSolution(
        gamma=gamma,
        radial_completion=None,
        vanishing_order=vanishing,
        verified=True,
        n=n,
        ell=ell,
    )


def radial_completion(n, ell, residues):
    """Even radial polynomial F = sum_{k=1}^{n/2} B_k (|y|^2)^k with
    L(F) = -(a_0 + a_1 |y|^2 + ... + a_h (|y|^2)^h), built bottom-up.

    The recurrence is B_1 = -a_0 / (2n) and, for 2 <= k <= n/2,
    B_k = -(a_{k-1} + (2(k-1) - 2)(2(k-1) - n) B_{k-1}) / ((2k)(2k + n - 2)).
    The top power (|y|^2)^(n/2) does not regenerate itself, which is what
    closes the construction.  Requires n >= 4 even and ell <= n - 2 even.
    """
    if n < 4 or n % 2:
        raise UnsupportedCaseError(
            "radial completion requires an even dimension n >= 4"
        )
    if ell % 2 or ell > n - 2:
        raise UnsupportedCaseError(
            "radial completion requires an even source degree <= n - 2"
        )
    residues = [Fraction(a) for a in residues]
    h = h_of(ell)
    if len(residues) != h + 1:
        raise ValueError(f"expected {h + 1} residue weights, got {len(residues)}")

    def a_at(index):
        return residues[index] if index <= h else Fraction(0)

    B = {1: -a_at(0) / (2 * n)}
    for k in range(2, n // 2 + 1):
        climb = Fraction((2 * (k - 1) - 2) * (2 * (k - 1) - n))
        B[k] = -(a_at(k - 1) + climb * B[k - 1]) / Fraction(2 * k * (2 * k + n - 2))

    out = Polynomial.zero(n)
    r2 = Polynomial.r_squared(n)
    for k, b in B.items():
        if b:
            out = out + b * (r2**k)
    return out


def solve_general(poly):
    """Solve L(G) = P, absorbing a nonvanishing top Laplacian into an even
    radial completion when n >= 4 and ell <= n - 2 are both even.

    Returns the same result as ``solve_gamma`` when no completion is needed.
    """
    try:
        return solve_gamma(poly)
    except ResidueObstructionError as obstruction:
        ell = poly.degree()
        n = poly.dimension
        if n < 4 or n % 2 or ell % 2 or ell > n - 2:
            raise UnsupportedCaseError(
                "residue present and outside the radial-completion hypotheses "
                f"(need n >= 4 even and ell <= n - 2 even; got n={n}, ell={ell})"
            ) from obstruction
        h = h_of(ell)
        top = obstruction.top_laplacian.constant_term()
        table = coefficient_table(n, ell)
        chain = _laplacian_chain(poly, h)
        gamma = _combination(poly, chain, table, h)
        completion = radial_completion(n, ell, [top * a for a in table.residues])
        if apply_L(gamma + completion) != poly:
            raise AssertionError("completed construction failed exact verification")
        return CorrectionSolution(
            gamma=gamma,
            radial_completion=completion,
            vanishing_order=h + 1,
            verified=True,
            n=n,
            ell=ell,
        )


def project_to_admissible(poly):
    """Subtract an exact radial (or radial-times-linear) multiple so that the
    top iterated Laplacian of the result vanishes identically.

    Used to manufacture admissible test inputs; already-admissible inputs are
    returned unchanged.
    """
    ell = _validated_source(poly)
    n = poly.dimension
    h = h_of(ell)
    top = iterated_laplacian(poly, h)
    if top.is_zero:
        return poly
    r2 = Polynomial.r_squared(n)
    if ell % 2 == 0:
        reference = iterated_laplacian(r2 ** (ell // 2), h).constant_term()
        adjusted = poly - (top.constant_term() / reference) * (r2 ** (ell // 2))
    else:
        # top is a linear form; |y|^(ell-1) * y_i reproduces d * y_i exactly
        base = r2 ** ((ell - 1) // 2)
        probe = iterated_laplacian(base * Polynomial.variable(n, 0), h)
        d = probe.coefficient((1,) + (0,) * (n - 1))
        adjusted = poly
        for i in range(n):
            alpha = tuple(1 if idx == i else 0 for idx in range(n))
            b = top.coefficient(alpha)
            if b:
                adjusted = adjusted - (b / d) * (base * Polynomial.variable(n, i))
    if not iterated_laplacian(adjusted, h).is_zero:
        raise AssertionError("projection failed to clear the top Laplacian")
    return adjusted


def kernel_basis(n):
    """Polynomials annihilated by L: y_1, ..., y_n and |y|^2 - 1."""
    basis = [Polynomial.variable(n, i) for i in range(n)]
    basis.append(Polynomial.r_squared(n) - Polynomial.constant(n, 1))
    return basis
