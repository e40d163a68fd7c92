"""Exception types shared across the package."""


class DimensionMismatchError(ValueError):
    """Operands disagree on the ambient dimension."""


class ExactnessError(TypeError):
    """A non-exact value (float) tried to enter the rational coefficient tier."""


class ResidueObstructionError(Exception):
    """The correction equation has no pure polynomial solution for this input.

    Raised when the top iterated Laplacian of the source polynomial does not
    vanish.  Carries the leftover radial residue polynomial so callers can
    inspect it or route the input to the radial-completion solver.
    """

    def __init__(self, message, residue, top_laplacian):
        super().__init__(message)
        self.residue = residue
        self.top_laplacian = top_laplacian


class CharacteristicGuardError(Exception):
    """A recurrence denominator vanished while building the coefficient table.

    ``root`` names which root of the characteristic equation fired:
    ``"half-dimension"`` for 2j = n, ``"degree"`` for j = (ell - 1) - 2(k - j).
    """

    def __init__(self, n, ell, j, k, root):
        super().__init__(
            f"characteristic denominator vanished at cell (j={j}, k={k}) "
            f"for n={n}, ell={ell} ({root} root)"
        )
        self.n = n
        self.ell = ell
        self.j = j
        self.k = k
        self.root = root


class DivergentMomentError(ValueError):
    """Bubble-weighted moment of a polynomial of degree >= n diverges."""


class UnsupportedCaseError(ValueError):
    """Inputs fall outside the hypotheses of the requested method."""
