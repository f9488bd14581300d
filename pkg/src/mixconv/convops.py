"""Reference convolution operations, forward and backward.

Covers depthwise (with channel multiplier and dilation), pointwise 1x1
(optionally grouped), and dense k x k convolution for network stems.
Padding follows ceil-mode ``same`` with the extra pixel after
(bottom/right); ``valid`` pads nothing. Kernels carry no bias.

Summation order per output element is fixed (row tap outer, column tap
inner, input channel innermost) so results are bit-reproducible and
match a naive loop nest using the same order.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import GeometryError, ShapeError
from .tensor import Tensor


@dataclass(frozen=True)
class ConvGeom:
    """Square-kernel convolution geometry."""

    kernel: int
    stride: int = 1
    dilation: int = 1
    padding: str = "same"
    multiplier: int = 1

    def __post_init__(self):
        if self.kernel < 1 or self.kernel % 2 == 0:
            raise GeometryError(f"kernel must be odd and positive, got {self.kernel}")
        if self.stride not in (1, 2):
            raise GeometryError(f"stride must be 1 or 2, got {self.stride}")
        if self.dilation < 1:
            raise GeometryError(f"dilation must be >= 1, got {self.dilation}")
        if self.dilation > 1 and self.stride != 1:
            raise GeometryError("dilation > 1 requires stride 1")
        if self.padding not in ("same", "valid"):
            raise GeometryError(f"padding must be 'same' or 'valid', got {self.padding!r}")
        if self.multiplier < 1:
            raise GeometryError(f"multiplier must be >= 1, got {self.multiplier}")

    @property
    def effective_kernel(self) -> int:
        return (self.kernel - 1) * self.dilation + 1


@dataclass(frozen=True)
class PadAmounts:
    """Zero padding in pixels on each side."""

    top: int
    bottom: int
    left: int
    right: int


def _pad_1d(extent: int, geom: ConvGeom) -> tuple[int, int, int]:
    """(before, after, out_extent) along one spatial axis."""
    k_eff = geom.effective_kernel
    if geom.padding == "same":
        out = -(-extent // geom.stride)
        total = max((out - 1) * geom.stride + k_eff - extent, 0)
        before = total // 2
        return before, total - before, out
    if k_eff > extent:
        raise GeometryError(f"valid padding needs extent >= {k_eff}, got {extent}")
    return 0, 0, (extent - k_eff) // geom.stride + 1


def pad_compute(in_extent: int, geom: ConvGeom) -> tuple[PadAmounts, int]:
    """Padding and output extent for a square input of the given extent."""
    if in_extent < 1:
        raise GeometryError(f"input extent must be >= 1, got {in_extent}")
    before, after, out = _pad_1d(in_extent, geom)
    return PadAmounts(before, after, before, after), out


def _plan(x: Tensor, geom: ConvGeom):
    """(pad_top, pad_left, out_h, out_w) for a tensor under a geometry."""
    s = x.shape
    top, _, out_h = _pad_1d(s.h, geom)
    left, _, out_w = _pad_1d(s.w, geom)
    return top, left, out_h, out_w


def depthwise_forward(x: Tensor, w: Tensor, geom: ConvGeom) -> Tensor:
    """Depthwise convolution; output channel z reads input channel z // m."""
    k, c, m = geom.kernel, x.shape.c, geom.multiplier
    if w.array.shape != (k, k, c, m):
        raise ShapeError(f"kernel shape {w.array.shape} != {(k, k, c, m)}")
    top, left, out_h, out_w = _plan(x, geom)
    y = _kernels.depthwise_forward(
        x.array, w.array, geom.stride, geom.dilation, top, left, out_h, out_w
    )
    return Tensor.wrap(y)


def depthwise_backward(x: Tensor, w: Tensor, geom: ConvGeom, dy: Tensor) -> tuple[Tensor, Tensor]:
    """Exact adjoint of :func:`depthwise_forward`."""
    k, c, m = geom.kernel, x.shape.c, geom.multiplier
    if w.array.shape != (k, k, c, m):
        raise ShapeError(f"kernel shape {w.array.shape} != {(k, k, c, m)}")
    top, left, out_h, out_w = _plan(x, geom)
    if dy.array.shape != (x.shape.n, out_h, out_w, c * m):
        raise ShapeError(
            f"dy shape {dy.array.shape} != {(x.shape.n, out_h, out_w, c * m)}"
        )
    dx, dw = _kernels.depthwise_backward(
        x.array, w.array, dy.array, geom.stride, geom.dilation, top, left
    )
    return Tensor.wrap(dx), Tensor.wrap(dw)


def conv_forward(x: Tensor, w: Tensor, geom: ConvGeom) -> Tensor:
    """Dense k x k convolution (used for network stems)."""
    k = geom.kernel
    if w.array.ndim != 4 or w.array.shape[:3] != (k, k, x.shape.c):
        raise ShapeError(f"kernel shape {w.array.shape} incompatible with k={k}, c_in={x.shape.c}")
    top, left, out_h, out_w = _plan(x, geom)
    y = _kernels.conv_forward(
        x.array, w.array, geom.stride, geom.dilation, top, left, out_h, out_w
    )
    return Tensor.wrap(y)


def conv_backward(x: Tensor, w: Tensor, geom: ConvGeom, dy: Tensor) -> tuple[Tensor, Tensor]:
    """Exact adjoint of :func:`conv_forward`."""
    k = geom.kernel
    if w.array.ndim != 4 or w.array.shape[:3] != (k, k, x.shape.c):
        raise ShapeError(f"kernel shape {w.array.shape} incompatible with k={k}, c_in={x.shape.c}")
    top, left, out_h, out_w = _plan(x, geom)
    if dy.array.shape != (x.shape.n, out_h, out_w, w.array.shape[3]):
        raise ShapeError(
            f"dy shape {dy.array.shape} != {(x.shape.n, out_h, out_w, w.array.shape[3])}"
        )
    dx, dw = _kernels.conv_backward(
        x.array, w.array, dy.array, geom.stride, geom.dilation, top, left
    )
    return Tensor.wrap(dx), Tensor.wrap(dw)


def _pointwise_check(x: Tensor, w: Tensor, groups: int) -> tuple[int, int]:
    if w.array.ndim != 4 or w.array.shape[0] != 1 or w.array.shape[1] != 1:
        raise ShapeError(f"pointwise kernel must be (1, 1, c_in, c_out), got {w.array.shape}")
    c_in, c_out = w.array.shape[2], w.array.shape[3]
    if x.shape.c != c_in:
        raise ShapeError(f"input has {x.shape.c} channels, kernel expects {c_in}")
    if groups < 1 or c_in % groups or c_out % groups:
        raise ShapeError(f"groups={groups} must divide c_in={c_in} and c_out={c_out}")
    return c_in, c_out


def pointwise_forward(x: Tensor, w: Tensor, groups: int = 1) -> Tensor:
    """1x1 convolution. With groups > 1 only the block-diagonal part of
    ``w`` participates: output group t reads input group t alone."""
    c_in, c_out = _pointwise_check(x, w, groups)
    gi, go = c_in // groups, c_out // groups
    geom = ConvGeom(kernel=1)
    if groups == 1:
        return conv_forward(x, w, geom)
    parts = []
    for t in range(groups):
        xg = Tensor.wrap(x.array[:, :, :, t * gi:(t + 1) * gi].copy())
        wg = Tensor.wrap(w.array[:, :, t * gi:(t + 1) * gi, t * go:(t + 1) * go].copy())
        parts.append(conv_forward(xg, wg, geom).array)
    return Tensor.wrap(np.concatenate(parts, axis=3))


def pointwise_backward(x: Tensor, w: Tensor, groups: int, dy: Tensor) -> tuple[Tensor, Tensor]:
    """Adjoint of :func:`pointwise_forward`; off-diagonal blocks of ``dw``
    are zero since they never contribute."""
    c_in, c_out = _pointwise_check(x, w, groups)
    if dy.array.shape != (x.shape.n, x.shape.h, x.shape.w, c_out):
        raise ShapeError(f"dy shape {dy.array.shape} incompatible with c_out={c_out}")
    gi, go = c_in // groups, c_out // groups
    geom = ConvGeom(kernel=1)
    if groups == 1:
        return conv_backward(x, w, geom, dy)
    dx = np.zeros_like(x.array)
    dw = np.zeros_like(w.array)
    for t in range(groups):
        xg = Tensor.wrap(x.array[:, :, :, t * gi:(t + 1) * gi].copy())
        wg = Tensor.wrap(w.array[:, :, t * gi:(t + 1) * gi, t * go:(t + 1) * go].copy())
        dyg = Tensor.wrap(dy.array[:, :, :, t * go:(t + 1) * go].copy())
        dxg, dwg = conv_backward(xg, wg, geom, dyg)
        dx[:, :, :, t * gi:(t + 1) * gi] = dxg.array
        dw[:, :, t * gi:(t + 1) * gi, t * go:(t + 1) * go] = dwg.array
    return Tensor.wrap(dx), Tensor.wrap(dw)
