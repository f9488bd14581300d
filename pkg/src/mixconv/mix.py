"""Channel partitioning and the mixed-kernel depthwise convolution.

A mixed convolution splits the input channels into groups, runs an
independent depthwise convolution with its own kernel size (and
optionally dilation) per group, and concatenates the results. With one
group it degenerates to a vanilla depthwise convolution, bit for bit.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .convops import ConvGeom, depthwise_backward, depthwise_forward
from .errors import PartitionError, ShapeError, SpecError
from .tensor import Tensor


def default_kernels(groups: int) -> tuple[int, ...]:
    """Kernel schedule (3, 5, ..., 2g+1): group t uses size 2t+1."""
    if groups < 1:
        raise PartitionError(f"groups must be >= 1, got {groups}")
    return tuple(2 * t + 1 for t in range(1, groups + 1))


def partition_equal(c: int, g: int) -> tuple[int, ...]:
    """Split c channels into g near-equal counts, remainder to the front."""
    if g < 1 or c < g:
        raise PartitionError(f"cannot split c={c} channels into g={g} nonempty groups")
    base, rem = divmod(c, g)
    return tuple(base + 1 if t < rem else base for t in range(g))


def partition_exponential(c: int, g: int) -> tuple[int, ...]:
    """Group t gets max(1, floor(c / 2^t)) channels; the last group takes
    the remainder."""
    if g < 1:
        raise PartitionError(f"groups must be >= 1, got {g}")
    if c < 2 ** (g - 1):
        raise PartitionError(f"exponential partition needs c >= 2^(g-1) = {2 ** (g - 1)}, got c={c}")
    head = [max(1, c >> t) for t in range(1, g)]
    last = c - sum(head)
    if last < 1:
        raise PartitionError(f"exponential partition of c={c} into g={g} empties the last group")
    return tuple(head + [last])


@dataclass(frozen=True)
class MixConvSpec:
    """Static description of one mixed depthwise convolution.

    ``channels[t]`` input channels are convolved with a
    ``kernels[t] x kernels[t]`` depthwise kernel at ``dilations[t]``.
    Effective kernel sizes ((k-1)*d + 1) must be strictly increasing so
    no two groups are mergeable. Padding is always ``same``.
    """

    channels: tuple[int, ...]
    kernels: tuple[int, ...]
    multiplier: int = 1
    stride: int = 1
    dilations: tuple[int, ...] = field(default=())

    def __post_init__(self):
        channels = tuple(int(v) for v in self.channels)
        kernels = tuple(int(v) for v in self.kernels)
        dils = tuple(int(v) for v in self.dilations) if self.dilations else (1,) * len(kernels)
        object.__setattr__(self, "channels", channels)
        object.__setattr__(self, "kernels", kernels)
        object.__setattr__(self, "dilations", dils)
        if not kernels or len(kernels) != len(channels) or len(dils) != len(kernels):
            raise SpecError(f"kernels/channels/dilations lengths differ: {kernels}, {channels}, {dils}")
        if any(c < 1 for c in channels):
            raise SpecError(f"every group needs at least one channel: {channels}")
        if any(k < 1 or k % 2 == 0 for k in kernels):
            raise SpecError(f"kernel sizes must be odd and positive: {kernels}")
        if any(d < 1 for d in dils):
            raise SpecError(f"dilations must be >= 1: {dils}")
        eff = [(k - 1) * d + 1 for k, d in zip(kernels, dils)]
        if any(b <= a for a, b in zip(eff, eff[1:])):
            raise SpecError(f"effective kernel sizes must strictly increase: {eff}")
        if self.multiplier < 1:
            raise SpecError(f"multiplier must be >= 1, got {self.multiplier}")
        if self.stride not in (1, 2):
            raise SpecError(f"stride must be 1 or 2, got {self.stride}")
        if self.stride != 1 and any(d > 1 for d in dils):
            raise SpecError("dilated groups require stride 1")

    @classmethod
    def for_input(
        cls,
        c: int,
        groups: int,
        *,
        scheme: str = "equal",
        multiplier: int = 1,
        stride: int = 1,
        dilated: bool = False,
    ) -> "MixConvSpec":
        """Spec for c channels with the default kernel schedule.

        ``scheme`` picks the channel partition (equal or exponential).
        ``dilated`` replaces each kernel k by a 3x3 kernel at dilation
        (k-1)/2, preserving the receptive field at 3x3 cost.
        """
        if scheme == "equal":
            channels = partition_equal(c, groups)
        elif scheme == "exponential":
            channels = partition_exponential(c, groups)
        else:
            raise SpecError(f"unknown partition scheme {scheme!r}")
        kernels = default_kernels(groups)
        dils: tuple[int, ...] = ()
        if dilated:
            dils = tuple((k - 1) // 2 for k in kernels)
            kernels = (3,) * groups
        return cls(channels=channels, kernels=kernels, multiplier=multiplier,
                   stride=stride, dilations=dils)

    @property
    def groups(self) -> int:
        return len(self.kernels)

    @property
    def total_channels(self) -> int:
        return sum(self.channels)

    def group_geom(self, t: int) -> ConvGeom:
        return ConvGeom(kernel=self.kernels[t], stride=self.stride,
                        dilation=self.dilations[t], multiplier=self.multiplier)

    def channel_offsets(self) -> tuple[int, ...]:
        """Start offset of each group in the input channel axis."""
        offs = [0]
        for c in self.channels[:-1]:
            offs.append(offs[-1] + c)
        return tuple(offs)


def _check_kernels(kernels: Sequence[Tensor], spec: MixConvSpec):
    if len(kernels) != spec.groups:
        raise SpecError(f"{len(kernels)} kernel tensors for {spec.groups} groups")
    for t, w in enumerate(kernels):
        want = (spec.kernels[t], spec.kernels[t], spec.channels[t], spec.multiplier)
        if w.array.shape != want:
            raise ShapeError(f"group {t} kernel shape {w.array.shape} != {want}")


def mixconv_forward(x: Tensor, kernels: Sequence[Tensor], spec: MixConvSpec) -> Tensor:
    """Split x by spec.channels, convolve each group, concatenate."""
    if x.shape.c != spec.total_channels:
        raise ShapeError(f"input has {x.shape.c} channels, spec covers {spec.total_channels}")
    _check_kernels(kernels, spec)
    outs = []
    lo = 0
    for t in range(spec.groups):
        hi = lo + spec.channels[t]
        xg = Tensor.wrap(x.array[:, :, :, lo:hi].copy())
        outs.append(depthwise_forward(xg, kernels[t], spec.group_geom(t)).array)
        lo = hi
    return Tensor.wrap(np.concatenate(outs, axis=3))


def mixconv_backward(
    x: Tensor, kernels: Sequence[Tensor], spec: MixConvSpec, dy: Tensor
) -> tuple[Tensor, list[Tensor]]:
    """Adjoint of :func:`mixconv_forward`: per-group depthwise adjoints on
    the matching channel slices of dy."""
    if x.shape.c != spec.total_channels:
        raise ShapeError(f"input has {x.shape.c} channels, spec covers {spec.total_channels}")
    _check_kernels(kernels, spec)
    m = spec.multiplier
    dxs, dws = [], []
    lo = 0
    out_lo = 0
    for t in range(spec.groups):
        hi = lo + spec.channels[t]
        out_hi = out_lo + spec.channels[t] * m
        xg = Tensor.wrap(x.array[:, :, :, lo:hi].copy())
        dyg = Tensor.wrap(dy.array[:, :, :, out_lo:out_hi].copy())
        dxg, dwg = depthwise_backward(xg, kernels[t], spec.group_geom(t), dyg)
        dxs.append(dxg.array)
        dws.append(dwg)
        lo, out_lo = hi, out_hi
    return Tensor.wrap(np.concatenate(dxs, axis=3)), dws


def mixconv_param_count(spec: MixConvSpec) -> int:
    """Weight count: sum over groups of k^2 * c * m (dilation-free)."""
    return sum(k * k * c * spec.multiplier for k, c in zip(spec.kernels, spec.channels))
