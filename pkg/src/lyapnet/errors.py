"""Exception hierarchy shared across the package."""


class LyapnetError(Exception):
    """Base class for all errors raised by lyapnet."""


class NotHurwitzError(LyapnetError):
    """A state matrix has an eigenvalue with non-negative real part."""


class SingularMatrixError(LyapnetError):
    """A linear solve or inversion failed on a (numerically) singular matrix."""


class NotPositiveDefiniteError(LyapnetError):
    """A matrix that must be positive definite has an eigenvalue <= tolerance."""


class InsufficientDataError(LyapnetError):
    """A time series is too short for the requested estimate."""


class DegenerateVarianceError(LyapnetError):
    """A covariance matrix has a zero diagonal entry."""


class DimensionMismatchError(LyapnetError):
    """Operand shapes are incompatible."""


class IndexOutOfRangeError(LyapnetError):
    """A node or entry index is outside [0, n)."""


class InvalidPairError(LyapnetError):
    """An upper-triangle index pair has i > j."""


class SelfLoopInPriorsError(LyapnetError):
    """An edge prior names a self-loop (i, i)."""


class BlowupError(LyapnetError):
    """A simulated trajectory exceeded the divergence guard."""


class RetryExhaustedError(LyapnetError):
    """A rejection-sampling loop hit its retry cap."""


class SingularBlockError(LyapnetError):
    """A covariance block needed by an information estimate is singular."""


class ZeroOffDiagonalError(LyapnetError):
    """Alignment is undefined: a matrix has an all-zero off-diagonal part."""
