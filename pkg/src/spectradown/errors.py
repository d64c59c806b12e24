"""Exception types shared across the toolkit."""


class SpectradownError(ValueError):
    """Base class for all domain errors raised by this package."""


class DimensionMismatchError(SpectradownError):
    """Array sizes are inconsistent with the declared grid shape."""


class NonFiniteValueError(SpectradownError):
    """Field values contain NaN or infinity."""


class InvalidSpacingError(SpectradownError):
    """Grid spacing dx must be a positive, finite number."""


class NotDivisibleError(SpectradownError):
    """Grid dimensions are not divisible by the resampling factor."""


class ChannelOutOfRangeError(SpectradownError):
    """Requested channel index or name does not exist in the field."""


class GridMismatchError(SpectradownError):
    """Two fields that must share a grid (H, W, dx, channels) do not."""


class TooFewBinsError(SpectradownError):
    """Radial binning needs at least two annuli."""


class FairEstimatorError(SpectradownError):
    """The fair CRPS estimator needs at least two ensemble members."""


class EvenKernelError(SpectradownError):
    """Convolution kernels must have odd size so they have a centre tap."""


class ChannelMismatchError(SpectradownError):
    """Model channel configuration does not match the input field."""


class ShapeMismatchError(SpectradownError):
    """Gradient/parameter arrays have inconsistent shapes."""


class EmptyDatasetError(SpectradownError):
    """Training or evaluation was given no samples."""


class DivergenceDetectedError(SpectradownError):
    """Training loss became non-finite; carries the partial history."""

    def __init__(self, message, history=None):
        super().__init__(message)
        self.history = history


class GrdFormatError(SpectradownError):
    """A GRD1 file is corrupt, truncated, or has the wrong magic."""


class ModelFormatError(SpectradownError):
    """A TDS1 model file is corrupt, truncated, or has the wrong magic."""
