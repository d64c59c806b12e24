import numpy as np
import pytest

from spectradown import (
    FieldPair,
    block_average_downsample,
    field_stats,
    make_field,
    upsample_nearest,
)
from spectradown.errors import (
    DimensionMismatchError,
    InvalidSpacingError,
    NonFiniteValueError,
    NotDivisibleError,
)

from conftest import random_field


class TestMakeField:
    def test_all_zero_field(self):
        f = make_field([0, 0, 0, 0], 2, 2, 1.0, ["a"])
        assert f.values.shape == (1, 2, 2)
        assert np.all(f.values == 0.0)

    def test_nan_rejected(self):
        with pytest.raises(NonFiniteValueError):
            make_field([0.0, np.nan, 0.0, 0.0], 2, 2, 1.0, ["a"])

    def test_inf_rejected(self):
        with pytest.raises(NonFiniteValueError):
            make_field([0.0, np.inf, 0.0, 0.0], 2, 2, 1.0, ["a"])

    def test_degenerate_grid_rejected(self):
        with pytest.raises(DimensionMismatchError):
            make_field([0.0, 0.0], 1, 2, 1.0, ["a"])

    @pytest.mark.parametrize("dx", [0.0, -1.0, np.inf])
    def test_bad_spacing(self, dx):
        with pytest.raises(InvalidSpacingError):
            make_field([0.0] * 4, 2, 2, dx, ["a"])

    def test_length_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            make_field([0.0] * 5, 2, 2, 1.0, ["a"])

    def test_duplicate_names(self):
        with pytest.raises(DimensionMismatchError):
            make_field([0.0] * 8, 2, 2, 1.0, ["a", "a"])

    def test_roundtrip_bit_exact(self):
        rng = np.random.default_rng(3)
        vals = rng.standard_normal((2, 4, 3))
        f = make_field(vals, 4, 3, 0.5, ["x", "y"])
        assert np.array_equal(f.values, vals)
        assert np.array_equal(f.channel(1), vals[1])

    def test_values_immutable(self):
        f = make_field([0.0] * 4, 2, 2, 1.0, ["a"])
        with pytest.raises(ValueError):
            f.values[0, 0, 0] = 1.0


class TestBlockAverage:
    def test_constant_preserved(self):
        f = make_field(np.full((1, 4, 4), 7.25), 4, 4, 1.0, ["a"])
        coarse = block_average_downsample(f, 2)
        assert np.all(coarse.values == 7.25)
        assert coarse.dx == 2.0

    def test_hand_computed_block_mean(self):
        f = make_field([[1.0, 3.0], [5.0, 7.0]], 2, 2, 1.0, ["a"])
        coarse = block_average_downsample(f, 2)
        assert coarse.values.shape == (1, 1, 1)
        assert coarse.values[0, 0, 0] == 4.0

    def test_not_divisible(self):
        f = make_field(np.zeros((1, 4, 4)), 4, 4, 1.0, ["a"])
        with pytest.raises(NotDivisibleError):
            block_average_downsample(f, 3)

    def test_spatial_mean_preserved(self):
        f = random_field(8, 8, seed=11, channels=("u", "v"))
        coarse = block_average_downsample(f, 4)
        for c in range(2):
            assert coarse.values[c].mean() == pytest.approx(f.values[c].mean(), rel=1e-14)


class TestUpsampleNearest:
    def test_blocks(self):
        x = np.array([[[1.0, 2.0], [3.0, 4.0]]])
        up = upsample_nearest(x, 2)
        assert up.shape == (1, 4, 4)
        assert np.all(up[0, :2, :2] == 1.0)
        assert np.all(up[0, 2:, 2:] == 4.0)

    def test_downsample_inverts_upsample(self):
        # power-of-two factor keeps the block means bit-exact
        f = random_field(4, 4, seed=2)
        up = make_field(upsample_nearest(f.values, 2), 8, 8, f.dx / 2, f.channel_names)
        back = block_average_downsample(up, 2)
        np.testing.assert_array_equal(back.values, f.values)


class TestFieldStats:
    def test_zero_field(self):
        f = make_field(np.zeros((1, 2, 2)), 2, 2, 1.0, ["a"])
        stats = field_stats(f)["a"]
        assert stats.mean == 0.0 and stats.variance == 0.0

    def test_hand_computed(self):
        f = make_field([1.0, 2.0, 3.0, 4.0], 2, 2, 1.0, ["a"])
        stats = field_stats(f)["a"]
        assert stats.mean == 2.5
        assert stats.variance == 1.25  # population variance
        assert stats.min == 1.0 and stats.max == 4.0

    def test_channels_independent(self):
        vals = np.stack([np.zeros((2, 2)), np.full((2, 2), 3.0)])
        f = make_field(vals, 2, 2, 1.0, ["a", "b"])
        stats = field_stats(f)
        assert stats["a"].mean == 0.0
        assert stats["b"].mean == 3.0 and stats["b"].variance == 0.0


class TestFieldPair:
    def test_factor_checked(self):
        coarse = random_field(4, 4, seed=0)
        fine = random_field(16, 16, seed=1)
        FieldPair(input=coarse, target=fine, factor=4.0)
        with pytest.raises(DimensionMismatchError):
            FieldPair(input=coarse, target=fine, factor=2.0)
