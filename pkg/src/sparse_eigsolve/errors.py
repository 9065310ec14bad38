"""Exception and warning types raised by the solver pipeline."""


class DimensionMismatch(ValueError):
    """Objects that must share an ambient dimension do not."""


class BasisBudgetExceeded(RuntimeError):
    """A monomial basis would exceed the configured size budget."""

    def __init__(self, size, budget, what="basis"):
        self.size = size
        self.budget = budget
        super().__init__(f"{what} has more than {budget} lattice points (reached {size})")


class RankDeficient(RuntimeError):
    """The lower-right block of the resultant matrix does not have full row rank.

    Raised when ``rank(M22) < q``. Typical causes are a system that is not
    zero-dimensional, solutions of multiplicity greater than one, or
    declared polytopes that are too small.
    """

    def __init__(self, rank, q, detail=""):
        self.rank = rank
        self.q = q
        msg = f"rank(M22) = {rank} < q = {q}"
        if detail:
            msg += f"; {detail}"
        super().__init__(msg)


class CoordinateUnrecoverable(ValueError):
    """The basis exponents do not generate the unit vector of a coordinate."""

    def __init__(self, coordinate):
        self.coordinate = coordinate
        super().__init__(f"coordinate x{coordinate + 1} cannot be recovered from the basis monomials")


class VanishingLeadCoordinate(ValueError):
    """An eigenvector has (numerically) zero weight on the unit monomial."""


class NoAcceptedSolutions(RuntimeError):
    """The pipeline finished but no candidate passed identification."""


class MultiplicityWarning(UserWarning):
    """Eigenpairs were dropped because their residuals exceeded tolerance."""
