"""Exception types raised by the tensor algebra routines."""


class TensorError(ValueError):
    """Base class for all errors raised by :mod:`tgsvd`."""


class DimensionMismatchError(TensorError):
    pass


class NonFiniteError(TensorError):
    pass


class SymmetryViolationError(TensorError):
    """A frequency-domain stack that should come from a real tensor does not."""


class RankOutOfRangeError(TensorError):
    pass


class SingularTensorError(TensorError):
    """Raised when a Fourier slice of a square tensor is numerically singular."""

    def __init__(self, frequency, message=None):
        self.frequency = frequency
        super().__init__(message or f"frontal slice {frequency} in the Fourier domain is singular")


class NotOrthonormalError(TensorError):
    pass


class SketchSizeError(TensorError):
    """Target rank plus oversampling does not fit the data dimensions."""


class OversamplingTooSmallError(TensorError):
    pass


class SingularPartitionError(TensorError):
    pass


class T3FFormatError(TensorError):
    pass


class BenchSpecError(ValueError):
    """Invalid benchmark configuration."""
