"""Exception types shared across the package."""


class CompletionError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(CompletionError):
    """Operand shapes are incompatible."""


class SymmetryViolation(CompletionError):
    """A spectral tensor is not conjugate-symmetric along mode 3."""


class NumericalFailure(CompletionError):
    """A numerical routine (typically an SVD) failed to converge."""


class EmptyMask(CompletionError):
    """The requested sampling ratio rounds to zero sampled tubes."""


class ZeroTruth(CompletionError):
    """A metric was asked to normalize by a zero reference tensor."""


class RankTooLarge(CompletionError):
    """Target rank exceeds what the index sets can support."""


class UnsupportedFormat(CompletionError):
    """A file is not in one of the supported formats."""


class IoFailure(CompletionError):
    """A file could not be read or is corrupt/truncated."""
