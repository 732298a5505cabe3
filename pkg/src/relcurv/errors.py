"""Exception hierarchy for the relcurv package.

Numerical failures (solver, quadrature, rank ambiguity) are distinguished
from contract violations (bad inputs, out-of-domain points) so the CLI can
map them onto its exit-code scheme.
"""


class RelcurvError(Exception):
    """Base class for all package errors."""


class OutOfDomainError(RelcurvError):
    """Chart point lies outside the metric chart's domain."""


class ProfileDomainError(OutOfDomainError):
    """Meridian parameter t lies outside the profile curve's domain."""


class DegenerateMetricError(RelcurvError):
    """Metric is not positive definite within tolerance."""


class JetOrderInsufficientError(RelcurvError):
    """Metric jet lacks the derivative order required by the operation."""


class SymmetryViolationError(RelcurvError):
    """Rank-5 input fails the curvature-derivative identity checks."""


class NotUnitError(RelcurvError):
    """Covector expected to be unit length is not."""


class RankToleranceError(RelcurvError):
    """Singular-value gap too small to decide a rank unambiguously."""


class DegenerateScalarGradientError(RelcurvError):
    """The scalar-curvature gradient vanishes; no direction form exists."""


class PlaneInsideDistributionError(RelcurvError):
    """2-plane lies inside the kernel distribution of the direction form."""


class ConstantCurvatureDegeneracyError(RelcurvError):
    """Umbilicity factor is undefined because the trace coefficient vanishes."""


class RadiusCollapseError(RelcurvError):
    """Meridian radius reached zero during integration."""


class StepFailureError(RelcurvError):
    """Adaptive integrator failed below its minimum step size."""


class DomainExitError(RelcurvError):
    """Trajectory left the regular region of the chart (meridian slope blew up)."""


class DomainViolationError(RelcurvError):
    """Quadrature or parameterization constraint broken on the requested range."""


class QuadratureFailureError(RelcurvError):
    """Adaptive quadrature did not converge to the requested accuracy."""


class ModulusOutOfRangeError(RelcurvError):
    """Elliptic modulus outside [0, 1)."""


class DiscriminantNegativeError(RelcurvError):
    """No real elliptic parameters exist for the given constants."""


class HypothesisViolatedError(RelcurvError):
    """Profile does not satisfy the constancy hypothesis of the check."""


class FieldNotEvaluableError(RelcurvError):
    """Unit field cannot be evaluated in a neighborhood of the point."""


class ConfigSyntaxError(RelcurvError):
    """Configuration text is not valid TOML."""


class ConfigSemanticError(RelcurvError):
    """Configuration is well-formed but semantically invalid."""


class IoFailureError(RelcurvError):
    """Output artifact could not be written."""
