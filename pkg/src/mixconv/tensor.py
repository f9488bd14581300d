"""Dense 4-D tensors in (batch, height, width, channel) layout.

Tensors are immutable float64 values backed by C-contiguous NumPy arrays,
so the flat element order is ``((n*h + y)*w + x)*c + z``. All operations
return new tensors.

Randomness comes from :class:`Rng`, a counter-based SplitMix64 generator
with a Box-Muller normal transform. The stream depends only on the seed
and the draw count, so identical seeds give byte-identical tensors on
every platform.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import BoundsError, ShapeError, SizeError

# Index arithmetic in the compiled kernels is 64-bit, but keep a sane,
# documented ceiling so element counts never overflow intermediate math.
MAX_ELEMENTS = 2**31

_U64 = np.uint64
_GOLDEN = _U64(0x9E3779B97F4A7C15)
_MIX1 = _U64(0xBF58476D1CE4E5B9)
_MIX2 = _U64(0x94D049BB133111EB)
_TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class Shape4:
    """Extents of a 4-D tensor: batch, height, width, channels."""

    n: int
    h: int
    w: int
    c: int

    def __post_init__(self):
        for name in ("n", "h", "w", "c"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or v < 1:
                raise ShapeError(f"extent {name}={v!r} must be a positive integer")
        if self.n * self.h * self.w * self.c > MAX_ELEMENTS:
            raise SizeError(f"element count {self.n * self.h * self.w * self.c} exceeds {MAX_ELEMENTS}")

    @property
    def size(self) -> int:
        return self.n * self.h * self.w * self.c

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.n, self.h, self.w, self.c)


@dataclass(frozen=True)
class Tensor:
    """Immutable dense 4-D tensor of float64 values."""

    shape: Shape4
    array: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.ascontiguousarray(self.array, dtype=np.float64)
        if arr.shape != self.shape.as_tuple():
            raise ShapeError(f"array shape {arr.shape} does not match {self.shape}")
        if arr is self.array and arr.flags.writeable:
            # defensive copy: never lock or alias a caller-owned buffer
            arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "array", arr)

    @classmethod
    def wrap(cls, array: np.ndarray) -> "Tensor":
        """Wrap a 4-D array, inferring the shape."""
        arr = np.asarray(array, dtype=np.float64)
        if arr.ndim != 4:
            raise ShapeError(f"expected a 4-D array, got ndim={arr.ndim}")
        return cls(Shape4(*arr.shape), arr)

    @property
    def data(self) -> np.ndarray:
        """Flat read-only view of the elements in row-major order."""
        return self.array.reshape(-1)

    @property
    def size(self) -> int:
        return self.shape.size

    def __repr__(self) -> str:  # pragma: no cover
        s = self.shape
        return f"Tensor(n={s.n}, h={s.h}, w={s.w}, c={s.c})"


class Rng:
    """Deterministic 64-bit generator (SplitMix64, counter-based).

    Output ``i`` is ``mix64(seed + (i+1) * 0x9E3779B97F4A7C15)`` with the
    standard SplitMix64 finalizer, evaluated with wrapping 64-bit
    arithmetic. Normal deviates use Box-Muller on consecutive raw pairs
    ``(2i, 2i+1)``, emitted in ``cos``/``sin`` order.
    """

    def __init__(self, seed: int):
        self._seed = _U64(int(seed) & 0xFFFFFFFFFFFFFFFF)
        self._count = 0

    def raw(self, count: int) -> np.ndarray:
        """Next ``count`` raw uint64 outputs."""
        if count < 0:
            raise ValueError("count must be nonnegative")
        idx = np.arange(self._count + 1, self._count + count + 1, dtype=np.uint64)
        self._count += count
        z = self._seed + idx * _GOLDEN
        z ^= z >> _U64(30)
        z *= _MIX1
        z ^= z >> _U64(27)
        z *= _MIX2
        z ^= z >> _U64(31)
        return z

    def uniform(self, count: int) -> np.ndarray:
        """``count`` doubles uniform on [0, 1), 53-bit resolution."""
        return (self.raw(count) >> _U64(11)).astype(np.float64) * 2.0**-53

    def normal(self, count: int, mean: float = 0.0, std: float = 1.0) -> np.ndarray:
        """``count`` normal deviates, deterministic in emission order."""
        pairs = (count + 1) // 2
        z = self.raw(2 * pairs)
        # u1 in (0, 1] so the log is finite; u2 in [0, 1).
        u1 = ((z[0::2] >> _U64(11)) + _U64(1)).astype(np.float64) * 2.0**-53
        u2 = (z[1::2] >> _U64(11)).astype(np.float64) * 2.0**-53
        r = np.sqrt(-2.0 * np.log(u1))
        theta = _TWO_PI * u2
        out = np.empty(2 * pairs, dtype=np.float64)
        out[0::2] = r * np.cos(theta)
        out[1::2] = r * np.sin(theta)
        return mean + std * out[:count]

    def integers(self, count: int, bound: int) -> np.ndarray:
        """``count`` integers in [0, bound) by 64-bit modular reduction."""
        if bound < 1:
            raise ValueError("bound must be positive")
        return (self.raw(count) % _U64(bound)).astype(np.int64)

    def permutation(self, length: int) -> np.ndarray:
        """Fisher-Yates permutation of range(length)."""
        order = np.arange(length, dtype=np.int64)
        if length < 2:
            return order
        draws = self.raw(length - 1)
        for i in range(length - 1, 0, -1):
            j = int(draws[length - 1 - i] % _U64(i + 1))
            order[i], order[j] = order[j], order[i]
        return order


def tensor_new(
    shape: Shape4 | tuple[int, int, int, int],
    fill: str = "zeros",
    *,
    value: float = 0.0,
    mean: float = 0.0,
    std: float = 1.0,
    seed: int = 0,
) -> Tensor:
    """Construct a tensor with a fill rule.

    ``fill`` is one of ``zeros``, ``ones``, ``constant`` (uses ``value``)
    or ``normal`` (uses ``mean``/``std``/``seed``; elements drawn in flat
    index order).
    """
    if not isinstance(shape, Shape4):
        shape = Shape4(*shape)
    dims = shape.as_tuple()
    if fill == "zeros":
        arr = np.zeros(dims)
    elif fill == "ones":
        arr = np.ones(dims)
    elif fill == "constant":
        arr = np.full(dims, float(value))
    elif fill == "normal":
        arr = Rng(seed).normal(shape.size, mean, std).reshape(dims)
    else:
        raise ValueError(f"unknown fill rule {fill!r}")
    return Tensor(shape, arr)


def slice_channels(x: Tensor, lo: int, hi: int) -> Tensor:
    """Copy channels [lo, hi) into a new tensor."""
    c = x.shape.c
    if not (0 <= lo < hi <= c):
        raise BoundsError(f"channel range [{lo}, {hi}) invalid for c={c}")
    return Tensor.wrap(x.array[:, :, :, lo:hi].copy())


def concat_channels(parts: Sequence[Tensor] | Iterable[Tensor]) -> Tensor:
    """Concatenate tensors along the channel axis, order preserved."""
    parts = list(parts)
    if not parts:
        raise ShapeError("concat needs at least one tensor")
    first = parts[0].shape
    for p in parts[1:]:
        s = p.shape
        if (s.n, s.h, s.w) != (first.n, first.h, first.w):
            raise ShapeError(f"spatial/batch mismatch: {s} vs {first}")
    return Tensor.wrap(np.concatenate([p.array for p in parts], axis=3))


def max_abs_diff(a: Tensor, b: Tensor) -> float:
    """Largest elementwise absolute difference between two tensors."""
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.max(np.abs(a.array - b.array)))
