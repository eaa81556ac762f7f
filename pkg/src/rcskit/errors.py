"""Exception hierarchy shared across the package.

Grouping matters for the CLI exit-code mapping: ValidationError subclasses
exit with 2, DegeneracyError subclasses with 3, DecodeError subclasses with 4.
"""


class RcskitError(Exception):
    """Base class for all package errors."""


class ValidationError(RcskitError, ValueError):
    """Bad arguments, malformed files, or violated preconditions."""


class FieldMismatchError(ValidationError):
    """Mixed exact/float operands in one operation."""


class UnsupportedFieldError(ValidationError):
    """Operation defined for one coefficient field only (e.g. float gcd)."""


class ZeroDenominatorError(ValidationError):
    """Rational function constructed with an identically zero denominator."""


class PoleError(RcskitError, ArithmeticError):
    """Evaluation of a rational function at a root of its denominator."""


class ResourceLimitError(ValidationError):
    """Request exceeds the documented desk-scale guard rails."""


class DegeneracyError(RcskitError, ArithmeticError):
    """Numerical or exact rank deficiency where full rank is required."""


class BranchCutError(DegeneracyError):
    """Matrix logarithm/power hit the principal-branch cut (eigenvalue at -1)."""


class DecodeError(RcskitError):
    """Recovery of a rational function from samples failed."""


class RankDeficiencyError(DecodeError):
    """Interpolation conditions are not independent; the fit is underdetermined."""


class InconsistentSamplesError(DecodeError):
    """No rational function of the requested degree passes through the samples."""


class TooManyErrorsError(DecodeError):
    """Corruptions exceed the decoder's error budget."""


class InfeasibleSystemError(DecodeError):
    """Decoder linear system admits only the zero solution."""


class PipelineFailure(RcskitError):
    """A pipeline stage failed; carries the stage name for reporting."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"pipeline stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause
