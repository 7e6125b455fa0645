"""Exception hierarchy shared by all modules."""


class PickandsError(Exception):
    """Base class for all errors raised by this package."""


class NotASimplexPoint(PickandsError):
    """Input weights are not a valid point of the unit simplex."""


class InvalidStep(PickandsError):
    """Grid step size outside the admissible range."""


class DimensionMismatch(PickandsError):
    """Operands live on simplices of different dimension."""


class ZeroVector(PickandsError):
    """The stable tail dependence function is undefined at the origin."""


class ParameterError(PickandsError):
    """Model or sampler parameters outside their admissible range."""


class DomainError(PickandsError):
    """Arguments of a deterministic transform outside its domain."""


class NonPositiveInput(PickandsError):
    """Positive input required (e.g. Frechet-scale observations)."""


class WeightConstraintViolated(PickandsError):
    """Weight functions violate the sum-to-one / non-negativity constraint."""


class TooFewObservations(PickandsError):
    """Sample too small for the requested operation."""


class SingularDesign(PickandsError):
    """Regression design matrix is numerically singular (comonotone-like data)."""


class SingularSigma(PickandsError):
    """Estimated vertex covariance matrix is numerically singular."""


class NonPositiveEstimate(PickandsError):
    """Endpoint-corrected reciprocal estimate is non-positive."""


class QuadratureNotConverged(PickandsError):
    """Doubling the quadrature nodes moved the result by more than the tolerance."""


class EmptySummary(PickandsError):
    """Experiment summary contains no rows."""
