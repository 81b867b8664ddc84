"""Exception types raised by the numerical routines."""


class BranchCalcError(Exception):
    """Base class for all errors raised by this package."""


class SingularMatrixError(BranchCalcError):
    """A pivot fell below the backward-stability threshold in lu_solve."""


class NoConvergenceError(BranchCalcError):
    """An iterative scheme hit its cap before reaching the tolerance.

    For quadrature this carries the last two iterates and their difference
    so the caller can see how far off the result still is.
    """

    def __init__(self, message, last=None, previous=None, diff=None):
        super().__init__(message)
        self.last = last
        self.previous = previous
        self.diff = diff


class ClusterOverlapError(BranchCalcError):
    """Two eigenvalue clusters cannot be enclosed by disjoint circles."""


class OnCutError(BranchCalcError):
    """Argument lies on (or within the margin of) the branch cut ray."""


class BadParametersError(BranchCalcError):
    """Contour parameters violate the shape invariants."""


class SpectrumOnCutError(BranchCalcError):
    """An eigenvalue sits within the angular margin of a cut ray."""


class FormsDisagreeError(BranchCalcError):
    """The two equivalent contour formulas differ by more than tolerance.

    Signals bad contour parameters rather than a property of the input.
    """

    def __init__(self, message, difference=None):
        super().__init__(message)
        self.difference = difference


class SingularOperatorError(BranchCalcError):
    """A zero eigenvalue was detected where invertibility is required."""


class BranchViolationError(BranchCalcError):
    """A square-root branch left its required half plane."""


class DiagonalDivergenceError(BranchCalcError):
    """The diagonal of a symbol kernel is not integrable toward zero."""


class TooSlowDecayError(BranchCalcError):
    """Sampled decay of an integrand is slower than 1/lambda."""


class IndexViolationError(BranchCalcError):
    """Derivative indices fall outside the admissible index set."""


class PoleHitError(BranchCalcError):
    """Evaluation point coincides with a pole of a closed-form symbol."""


class SpectrumHitError(BranchCalcError):
    """The resolvent parameter hit the spectrum."""


class TailUnknownError(BranchCalcError):
    """Spectrum is a finite truncation without a usable tail law."""


class IllConditionedFitError(BranchCalcError):
    """Least-squares basis is too collinear to fit reliably."""


class MatrixExpOverflowError(BranchCalcError):
    """Matrix exponential overflowed double precision."""


class UnknownExperimentError(BranchCalcError):
    """Experiment name is not in the catalog."""


class InvalidParametersError(BranchCalcError):
    """Experiment parameters failed validation."""
