import numpy as np
import pytest

from mixconv import Rng, Shape4, Tensor, concat_channels, max_abs_diff, slice_channels, tensor_new
from mixconv.errors import BoundsError, ShapeError, SizeError


class TestShape4:
    def test_rejects_nonpositive_extents(self):
        for bad in [(0, 1, 1, 1), (1, -2, 1, 1), (1, 1, 1, 0)]:
            with pytest.raises(ShapeError):
                Shape4(*bad)

    def test_rejects_oversized_count(self):
        with pytest.raises(SizeError):
            Shape4(2**16, 2**16, 2, 2)

    def test_size(self):
        assert Shape4(2, 3, 4, 5).size == 120


class TestFills:
    def test_ones(self):
        t = tensor_new((1, 2, 2, 1), "ones")
        assert t.data.tolist() == [1, 1, 1, 1]

    def test_constant(self):
        t = tensor_new((1, 1, 1, 3), "constant", value=2.5)
        assert t.data.tolist() == [2.5, 2.5, 2.5]

    def test_normal_is_deterministic(self):
        a = tensor_new((1, 2, 2, 1), "normal", seed=42)
        b = tensor_new((1, 2, 2, 1), "normal", seed=42)
        assert a.array.tobytes() == b.array.tobytes()

    def test_normal_seeds_differ(self):
        a = tensor_new((1, 4, 4, 2), "normal", seed=1)
        b = tensor_new((1, 4, 4, 2), "normal", seed=2)
        assert a.array.tobytes() != b.array.tobytes()

    def test_unknown_fill(self):
        with pytest.raises(ValueError):
            tensor_new((1, 1, 1, 1), "sparkle")


class TestTensor:
    def test_immutable(self):
        t = tensor_new((1, 2, 2, 1), "ones")
        with pytest.raises(ValueError):
            t.array[0, 0, 0, 0] = 5.0

    def test_flat_order_is_row_major(self):
        # flat index ((n*h + y)*w + x)*c + z
        shape = Shape4(2, 3, 4, 5)
        arr = np.arange(shape.size, dtype=np.float64).reshape(shape.as_tuple())
        t = Tensor(shape, arr)
        for n, y, x, z in [(0, 0, 0, 0), (1, 2, 3, 4), (0, 1, 2, 3), (1, 0, 3, 1)]:
            flat = ((n * shape.h + y) * shape.w + x) * shape.c + z
            assert t.data[flat] == t.array[n, y, x, z]

    def test_wrap_requires_4d(self):
        with pytest.raises(ShapeError):
            Tensor.wrap(np.zeros((2, 2)))


class TestSliceConcat:
    def test_slice_values(self):
        t = Tensor.wrap(np.arange(4.0).reshape(1, 1, 1, 4))
        assert slice_channels(t, 1, 3).data.tolist() == [1.0, 2.0]

    def test_identity_slice(self):
        t = tensor_new((1, 2, 2, 3), "normal", seed=3)
        s = slice_channels(t, 0, 3)
        assert s.array.tobytes() == t.array.tobytes()

    def test_empty_slice_rejected(self):
        t = tensor_new((1, 1, 1, 4), "ones")
        with pytest.raises(BoundsError):
            slice_channels(t, 2, 2)
        with pytest.raises(BoundsError):
            slice_channels(t, 1, 5)

    def test_split_concat_roundtrip(self):
        t = tensor_new((2, 3, 3, 7), "normal", seed=9)
        for cut in range(1, 7):
            back = concat_channels([slice_channels(t, 0, cut), slice_channels(t, cut, 7)])
            assert back.array.tobytes() == t.array.tobytes()

    def test_single_part(self):
        t = tensor_new((1, 2, 2, 2), "normal", seed=5)
        assert concat_channels([t]).array.tobytes() == t.array.tobytes()

    def test_spatial_mismatch(self):
        a = tensor_new((1, 3, 3, 1), "ones")
        b = tensor_new((1, 4, 3, 1), "ones")
        with pytest.raises(ShapeError):
            concat_channels([a, b])

    def test_concat_empty(self):
        with pytest.raises(ShapeError):
            concat_channels([])


class TestMaxAbsDiff:
    def test_zero_for_equal(self):
        t = tensor_new((1, 2, 2, 2), "normal", seed=4)
        assert max_abs_diff(t, t) == 0.0

    def test_value(self):
        a = Tensor.wrap(np.array([1.0, 2.0]).reshape(1, 1, 1, 2))
        b = Tensor.wrap(np.array([1.0, 2.5]).reshape(1, 1, 1, 2))
        assert max_abs_diff(a, b) == 0.5

    def test_zeros_vs_ones(self):
        assert max_abs_diff(tensor_new((1, 2, 2, 1)), tensor_new((1, 2, 2, 1), "ones")) == 1.0

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            max_abs_diff(tensor_new((1, 2, 2, 1)), tensor_new((1, 2, 2, 2)))


class TestRng:
    def test_same_seed_same_stream(self):
        assert Rng(7).raw(16).tolist() == Rng(7).raw(16).tolist()

    def test_stream_position_matters(self):
        r = Rng(7)
        first = r.normal(10)
        again = Rng(7)
        again.normal(4)
        rest = again.normal(6)
        np.testing.assert_array_equal(first[4:], rest)

    def test_normal_moments(self):
        vals = Rng(123).normal(200_000)
        assert abs(vals.mean()) < 0.01
        assert abs(vals.std() - 1.0) < 0.01

    def test_uniform_range(self):
        u = Rng(5).uniform(10_000)
        assert u.min() >= 0.0 and u.max() < 1.0

    def test_permutation_is_permutation(self):
        p = Rng(11).permutation(100)
        assert sorted(p.tolist()) == list(range(100))
