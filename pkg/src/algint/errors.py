"""Exception types raised across the package.

Every failure mode that callers are expected to catch has its own class;
generic ValueError/TypeError are reserved for plain misuse of an API.
"""


class AlgintError(Exception):
    """Base class for all package-specific errors."""


# --- measure evaluation ---

class NonconvergentQuadrature(AlgintError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class UnsupportedKind(AlgintError):
    """Operation not defined for this measure kind (e.g. quantiles of a 2-D measure)."""


class CatalogTooLarge(AlgintError):
    """Admissibility enumeration exceeds the configured budget."""


class KindMismatch(AlgintError):
    """Distribution-distance kind does not match the support dimensionality."""


# --- sampling ---

class InfeasibleSeparation(AlgintError):
    """A box cannot hold its allotted points at the required minimum separation."""


class ZeroMassSupport(AlgintError):
    """All box masses fell below the resolvable threshold."""


# --- polynomial arithmetic ---

class PrecisionLoss(AlgintError):
    """Intermediate result lost more precision than the contract allows."""


class NoConvergence(AlgintError):
    """Iterative root finding did not converge within the iteration budget."""


class NotMonic(AlgintError):
    """Operation requires a monic polynomial."""


class ExactZero(AlgintError):
    """log|p(z)| requested at a point where p(z) is zero to working precision."""

    def __init__(self, z=None):
        super().__init__(f"polynomial vanishes at {z} to working precision")
        self.z = z


# --- lattice reduction ---

class PrecisionExhausted(AlgintError):
    """Floating Gram-Schmidt data became unreliable; retry at higher precision."""


class EnumerationBudgetExceeded(AlgintError):
    """SVP enumeration visited more nodes than the configured budget."""


class DimensionTooLarge(AlgintError):
    """Exact enumeration requested above the hard dimension cap."""


# --- synthesis ---

class DegenerateNode(AlgintError):
    """|p'(z_j)| underflowed; sample points violate separation."""


class IllConditionedSolve(AlgintError):
    """Coordinate solve through the transform produced non-finite values."""


class EisensteinViolation(AlgintError):
    """Assembled output failed the Eisenstein check; internal logic error."""


# --- abelian-variety application ---

class AlphaTooSmall(AlgintError):
    """q(1 - margin) <= 1.65, below the positivity threshold of the circle measure."""


class NoObstructionFound(AlgintError):
    """No extension degree with a negative point count within the retry budget."""
