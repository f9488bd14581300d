"""Exception types raised across the package."""


class MixConvError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(MixConvError, ValueError):
    """Tensor shapes are inconsistent with the requested operation."""


class BoundsError(MixConvError, IndexError):
    """An index or channel range is out of bounds."""


class SizeError(MixConvError, ValueError):
    """A tensor would exceed the supported element count."""


class GeometryError(MixConvError, ValueError):
    """Invalid convolution geometry (kernel/stride/dilation/padding)."""


class PartitionError(MixConvError, ValueError):
    """A channel partition cannot be formed for the given (c, g)."""


class SpecError(MixConvError, ValueError):
    """A mixed-convolution or block specification violates its invariants."""


class ConfigError(MixConvError, ValueError):
    """A model configuration is unknown, malformed, or fails to propagate."""


class LabelError(MixConvError, ValueError):
    """A class label is outside the valid range."""


class TrainingDiverged(MixConvError, ArithmeticError):
    """Training produced a non-finite loss.

    Carries the failing step in ``step``.
    """

    def __init__(self, step: int, message: str = ""):
        self.step = step
        super().__init__(message or f"non-finite loss at step {step}")
