"""Exact multivariate polynomial arithmetic over the rationals.

Coefficients are ``fractions.Fraction`` throughout and every operation
renormalizes, so algebraic identities can be asserted with ``==`` instead of
tolerances.  A multi-index is a plain tuple of non-negative ints whose length
equals the ambient dimension; stored terms never carry a zero coefficient.
Iteration and serialized output follow graded-lexicographic order so that
artifacts are byte-reproducible.

The zero polynomial is the empty term map (with an explicit dimension); its
degree is reported as ``None`` rather than an arbitrary sentinel number.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .errors import DimensionMismatchError, ExactnessError

__all__ = [
    "Polynomial",
    "as_coefficient",
    "laplacian",
    "iterated_laplacian",
    "partial_derivative",
    "gradient",
    "euler_operator",
    "directional_pairing",
    "r2_multiply",
    "compose_shift",
    "apply_signed_permutation",
]


def as_coefficient(value):
    """Coerce ints / strings / Fractions to Fraction.  Floats are refused:
    they would silently break the exactness contract of this module."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise ExactnessError(f"not an exact rational coefficient: {value!r}")


def _grlex_key(alpha):
    return (sum(alpha), alpha)


class Polynomial:
    """Sparse polynomial in ``dimension`` variables with rational coefficients."""

    __slots__ = ("dimension", "terms")

    def __init__(self, dimension, terms=None):
        if not isinstance(dimension, int) or dimension < 1:
            raise ValueError(f"dimension must be a positive int, got {dimension!r}")
        clean = {}
        for alpha, coeff in (terms or {}).items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != dimension:
                raise DimensionMismatchError(
                    f"multi-index {alpha} has length {len(alpha)}, expected {dimension}"
                )
            if any(a < 0 for a in alpha):
                raise ValueError(f"negative exponent in multi-index {alpha}")
            coeff = as_coefficient(coeff)
            if coeff:
                clean[alpha] = clean.get(alpha, Fraction(0)) + coeff
                if not clean[alpha]:
                    del clean[alpha]
        object.__setattr__(self, "dimension", dimension)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # ---------------------------------------------------------------- basics

    @classmethod
    def zero(cls, dimension):
        return cls(dimension, {})

    @classmethod
    def constant(cls, dimension, value):
        return cls(dimension, {(0,) * dimension: as_coefficient(value)})

    @classmethod
    def variable(cls, dimension, index, power=1, coeff=1):
        """The monomial coeff * y_index**power (index is 0-based)."""
        alpha = [0] * dimension
        alpha[index] = power
        return cls(dimension, {tuple(alpha): as_coefficient(coeff)})

    @classmethod
    def r_squared(cls, dimension):
        """|y|^2 = y_1^2 + ... + y_n^2."""
        terms = {}
        for i in range(dimension):
            alpha = [0] * dimension
            alpha[i] = 2
            terms[tuple(alpha)] = Fraction(1)
        return cls(dimension, terms)

    @property
    def is_zero(self):
        return not self.terms

    def degree(self):
        """Total degree, or None for the zero polynomial."""
        if not self.terms:
            return None
        return max(sum(alpha) for alpha in self.terms)

    def is_homogeneous(self):
        degrees = {sum(alpha) for alpha in self.terms}
        return len(degrees) <= 1

    def coefficient(self, alpha):
        return self.terms.get(tuple(alpha), Fraction(0))

    def constant_term(self):
        return self.terms.get((0,) * self.dimension, Fraction(0))

    def homogeneous_parts(self):
        """Map degree -> homogeneous component (zero polynomial excluded)."""
        parts = {}
        for alpha, coeff in self.terms.items():
            parts.setdefault(sum(alpha), {})[alpha] = coeff
        return {
            d: Polynomial(self.dimension, t) for d, t in sorted(parts.items())
        }

    def sorted_terms(self):
        """Terms in graded-lexicographic order."""
        return sorted(self.terms.items(), key=lambda item: _grlex_key(item[0]))

    # ------------------------------------------------------------ arithmetic

    def _check_dimension(self, other):
        if self.dimension != other.dimension:
            raise DimensionMismatchError(
                f"cannot combine dimensions {self.dimension} and {other.dimension}"
            )

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.dimension == other.dimension and self.terms == other.terms

    def __hash__(self):
        return hash((self.dimension, frozenset(self.terms.items())))

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_dimension(other)
        terms = dict(self.terms)
        for alpha, coeff in other.terms.items():
            total = terms.get(alpha, Fraction(0)) + coeff
            if total:
                terms[alpha] = total
            else:
                terms.pop(alpha, None)
        return Polynomial(self.dimension, terms)

    def __neg__(self):
        return Polynomial(
            self.dimension, {a: -c for a, c in self.terms.items()}
        )

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            self._check_dimension(other)
            terms = {}
            for a1, c1 in self.terms.items():
                for a2, c2 in other.terms.items():
                    key = tuple(x + y for x, y in zip(a1, a2))
                    total = terms.get(key, Fraction(0)) + c1 * c2
                    if total:
                        terms[key] = total
                    else:
                        terms.pop(key, None)
            return Polynomial(self.dimension, terms)
        coeff = as_coefficient(other)
        return Polynomial(
            self.dimension, {a: c * coeff for a, c in self.terms.items()}
        )

    __rmul__ = __mul__

    def __pow__(self, exponent):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("exponent must be a non-negative int")
        result = Polynomial.constant(self.dimension, 1)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def __repr__(self):
        if self.is_zero:
            return f"Polynomial({self.dimension}, 0)"
        bits = []
        for alpha, coeff in self.sorted_terms():
            mono = "*".join(
                f"y{i + 1}^{a}" if a > 1 else f"y{i + 1}"
                for i, a in enumerate(alpha)
                if a
            )
            bits.append(f"{coeff}*{mono}" if mono else f"{coeff}")
        return f"Polynomial({self.dimension}, {' + '.join(bits)})"

    # ------------------------------------------------------------ evaluation

    def evaluate(self, point):
        """Evaluate monomial by monomial (no Horner rewriting).  Exact
        (Fraction) when every coordinate is exact; with float coordinates
        each term rounds once per power and once per accumulation, in the
        deterministic graded-lexicographic term order."""
        if len(point) != self.dimension:
            raise DimensionMismatchError(
                f"point length {len(point)} != dimension {self.dimension}"
            )
        exact = all(isinstance(x, (int, Fraction)) for x in point)
        total = Fraction(0) if exact else 0.0
        for alpha, coeff in self.sorted_terms():
            term = coeff if exact else float(coeff)
            for x, a in zip(point, alpha):
                if a:
                    term *= x**a
            total += term
        return total

    # ------------------------------------------------------------- serialize

    def to_json(self):
        """Schema: {"dimension": n, "terms": [{"alpha": [...], "num": str,
        "den": str}, ...]} with integers as decimal strings."""
        return {
            "dimension": self.dimension,
            "terms": [
                {
                    "alpha": list(alpha),
                    "num": str(coeff.numerator),
                    "den": str(coeff.denominator),
                }
                for alpha, coeff in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, data):
        try:
            dimension = int(data["dimension"])
            terms = {
                tuple(int(a) for a in entry["alpha"]): Fraction(
                    int(entry["num"]), int(entry["den"])
                )
                for entry in data["terms"]
            }
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed polynomial JSON: {exc}") from exc
        return cls(dimension, terms)


# ------------------------------------------------------------- differential


def partial_derivative(poly, index):
    """d(poly)/d(y_index), index 0-based."""
    terms = {}
    for alpha, coeff in poly.terms.items():
        a = alpha[index]
        if a:
            key = alpha[:index] + (a - 1,) + alpha[index + 1 :]
            terms[key] = terms.get(key, Fraction(0)) + coeff * a
    return Polynomial(poly.dimension, terms)


def laplacian(poly):
    """Sum of second partials over all variables."""
    terms = {}
    for alpha, coeff in poly.terms.items():
        for i, a in enumerate(alpha):
            if a >= 2:
                key = alpha[:i] + (a - 2,) + alpha[i + 1 :]
                add = coeff * a * (a - 1)
                total = terms.get(key, Fraction(0)) + add
                if total:
                    terms[key] = total
                else:
                    terms.pop(key, None)
    return Polynomial(poly.dimension, terms)


def iterated_laplacian(poly, count):
    """count-fold composition of the Laplacian (count = 0 is the identity)."""
    if count < 0:
        raise ValueError("iteration count must be non-negative")
    out = poly
    for _ in range(count):
        if out.is_zero:
            break
        out = laplacian(out)
    return out


def gradient(poly):
    """All first partials, as a list of polynomials."""
    return [partial_derivative(poly, i) for i in range(poly.dimension)]


def euler_operator(poly):
    """y . grad(poly); equals (degree * poly) on homogeneous input."""
    out = Polynomial.zero(poly.dimension)
    for i in range(poly.dimension):
        out = out + Polynomial.variable(poly.dimension, i) * partial_derivative(
            poly, i
        )
    return out


def directional_pairing(direction, poly):
    """<X, grad(poly)> for an exact rational vector X."""
    if len(direction) != poly.dimension:
        raise DimensionMismatchError(
            f"direction length {len(direction)} != dimension {poly.dimension}"
        )
    out = Polynomial.zero(poly.dimension)
    for i, x in enumerate(direction):
        x = as_coefficient(x)
        if x:
            out = out + partial_derivative(poly, i) * x
    return out


def r2_multiply(poly, power):
    """(y_1^2 + ... + y_n^2)^power * poly."""
    if power < 0:
        raise ValueError("power must be non-negative")
    if power == 0:
        return poly
    return Polynomial.r_squared(poly.dimension) ** power * poly


def compose_shift(poly, shift):
    """poly(y + shift) expanded exactly, for an exact rational shift vector."""
    n = poly.dimension
    if len(shift) != n:
        raise DimensionMismatchError(f"shift length {len(shift)} != dimension {n}")
    shift = [as_coefficient(s) for s in shift]
    out = {}
    for alpha, coeff in poly.terms.items():
        # expand prod_i (y_i + s_i)^{alpha_i} one variable at a time
        partial = {(0,) * n: coeff}
        for i, a in enumerate(alpha):
            if a == 0:
                continue
            expanded = {}
            powers = [shift[i] ** (a - j) for j in range(a + 1)]
            for beta, c in partial.items():
                for j in range(a + 1):
                    c2 = c * comb(a, j) * powers[j]
                    if not c2:
                        continue
                    key = beta[:i] + (j,) + beta[i + 1 :]
                    total = expanded.get(key, Fraction(0)) + c2
                    if total:
                        expanded[key] = total
                    else:
                        expanded.pop(key, None)
            partial = expanded
        for beta, c in partial.items():
            total = out.get(beta, Fraction(0)) + c
            if total:
                out[beta] = total
            else:
                out.pop(beta, None)
    return Polynomial(n, out)


def apply_signed_permutation(poly, permutation, signs):
    """poly(T y) for the signed permutation T: (Ty)_i = signs[i] * y_{perm[i]}.

    Used to check that verdicts of geometric tests are invariant under the
    symmetries of the weight (1 + |y|^2)^(-n).
    """
    n = poly.dimension
    if sorted(permutation) != list(range(n)):
        raise ValueError("permutation must be a rearrangement of 0..n-1")
    if any(s not in (1, -1) for s in signs):
        raise ValueError("signs must be +1 or -1")
    terms = {}
    for alpha, coeff in poly.terms.items():
        beta = [0] * n
        sign = 1
        for i in range(n):
            a = alpha[i]
            beta[permutation[i]] = a
            if a % 2 and signs[i] == -1:
                sign = -sign
        key = tuple(beta)
        terms[key] = terms.get(key, Fraction(0)) + sign * coeff
    return Polynomial(n, terms)
