"""Mixed-kernel depthwise convolutions, cost accounting, and model zoo."""

from ._kernels import BACKEND
from .tensor import Rng, Shape4, Tensor, concat_channels, max_abs_diff, slice_channels, tensor_new
from .convops import ConvGeom, PadAmounts, pad_compute
from .mix import (
    MixConvSpec,
    default_kernels,
    mixconv_backward,
    mixconv_forward,
    mixconv_param_count,
    partition_equal,
    partition_exponential,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ConvGeom",
    "MixConvSpec",
    "PadAmounts",
    "Rng",
    "Shape4",
    "Tensor",
    "concat_channels",
    "default_kernels",
    "max_abs_diff",
    "mixconv_backward",
    "mixconv_forward",
    "mixconv_param_count",
    "pad_compute",
    "partition_equal",
    "partition_exponential",
    "slice_channels",
    "tensor_new",
]
