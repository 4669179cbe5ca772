"""Exception types shared across the package."""


class ConfweightError(Exception):
    """Base class for all package-specific errors."""


class PointOutsideDomain(ConfweightError):
    """A point does not belong to the (open) domain of the map or weight."""


class BranchCutViolation(PointOutsideDomain):
    """A point lies on the ray excluded by a square-root branch."""


class DomainMismatch(ConfweightError):
    """Two objects defined over different domain families were combined."""


class RectangleNotInterior(ConfweightError):
    """A test rectangle is not strictly contained in the domain."""


class IntegrandNotFinite(ConfweightError):
    """An integrand returned NaN or Inf at an interior quadrature node."""


class InvalidExponents(ConfweightError):
    """Norm exponents violate the required ordering (e.g. 1 <= q < p)."""


class GridTooCoarse(ConfweightError):
    """A polar grid is too coarse for the requested stencil."""


class KpqDivergent(ConfweightError):
    """The dilatation integral defining the operator norm bound diverges."""


class ExponentOutOfRange(ConfweightError):
    """An exponent lies outside the admissible analytic range."""


class IterationDivergence(ConfweightError):
    """An iterative estimate failed to settle within the iteration budget."""


class RhsNotFinite(ConfweightError):
    """A right-hand side evaluated to NaN or Inf on the solver grid."""


class SingularTridiagonal(ConfweightError):
    """A tridiagonal radial system lost diagonal dominance."""
