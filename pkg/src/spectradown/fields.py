"""Grid-field data model and resampling utilities.

Conventions used throughout the package:

* values are stored as float64 arrays shaped ``(channel, row, col)``;
* the row index runs along y (meridional), the column index along x (zonal);
* grid spacing ``dx`` is isotropic and in meters;
* fields are immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, NotDivisibleError
from .validation import as_float_array, check_grid_dims, check_spacing


@dataclass(frozen=True)
class GridField:
    """A multi-channel 2D scalar field on a uniform grid.

    Attributes
    ----------
    values : ndarray, shape (channels, H, W)
        Field values, float64, marked read-only.
    dx : float
        Isotropic grid spacing in meters.
    channel_names : tuple of str
        One unique name per channel, e.g. ("u", "v", "t2m").
    """

    values: np.ndarray
    dx: float
    channel_names: tuple

    @property
    def n_channels(self) -> int:
        return self.values.shape[0]

    @property
    def height(self) -> int:
        return self.values.shape[1]

    @property
    def width(self) -> int:
        return self.values.shape[2]

    def channel(self, index: int) -> np.ndarray:
        return self.values[index]

    def with_values(self, values: np.ndarray) -> "GridField":
        """New field on the same grid with replaced values."""
        return make_field(values, self.height, self.width, self.dx, self.channel_names)


def make_field(values, height, width, dx, channel_names) -> GridField:
    """Build a validated GridField.

    Parameters
    ----------
    values : array-like
        Either flat of length channels*H*W or already shaped (channels, H, W).
    height, width : int
        Grid dimensions; both must be >= 2.
    dx : float
        Positive isotropic spacing in meters.
    channel_names : sequence of str
        Unique channel identifiers.
    """
    height, width = check_grid_dims(height, width)
    dx = check_spacing(dx)
    names = tuple(str(n) for n in channel_names)
    if len(set(names)) != len(names):
        raise DimensionMismatchError(f"channel names must be unique, got {names}")
    arr = as_float_array(values, "field values")
    expected = len(names) * height * width
    if arr.size != expected:
        raise DimensionMismatchError(
            f"expected {expected} values for {len(names)}x{height}x{width}, "
            f"got {arr.size}"
        )
    arr = arr.reshape(len(names), height, width).copy()
    arr.setflags(write=False)
    return GridField(values=arr, dx=dx, channel_names=names)


def single_channel_field(values2d: np.ndarray, dx: float, name: str) -> GridField:
    """Wrap one (H, W) array as a one-channel GridField."""
    values2d = np.asarray(values2d)
    return make_field(values2d[np.newaxis], values2d.shape[0], values2d.shape[1], dx, (name,))


@dataclass(frozen=True)
class FieldPair:
    """A coarse input field paired with its fine-resolution target."""

    input: GridField
    target: GridField
    factor: float

    def __post_init__(self):
        for dim_in, dim_out, axis in (
            (self.input.height, self.target.height, "height"),
            (self.input.width, self.target.width, "width"),
        ):
            if round(self.factor * dim_in) != dim_out:
                raise DimensionMismatchError(
                    f"target {axis} {dim_out} is not factor x input {axis} "
                    f"({self.factor} x {dim_in})"
                )
        missing = set(self.target.channel_names) - set(self.input.channel_names)
        if missing:
            raise DimensionMismatchError(
                f"target channels {sorted(missing)} have no matching input channel"
            )


def block_average_downsample(field: GridField, factor: int) -> GridField:
    """Coarsen by averaging factor x factor blocks; dx scales by factor.

    H and W must be divisible by the factor. Each output cell is the
    arithmetic mean of its block, so the spatial mean is preserved exactly.
    Unlike make_field, the output may be as small as 1x1 (derivative
    operations reject such grids at their own preconditions).
    """
    factor = int(factor)
    if factor < 1:
        raise NotDivisibleError(f"factor must be a positive integer, got {factor}")
    c, h, w = field.values.shape
    if h % factor or w % factor:
        raise NotDivisibleError(f"{h}x{w} grid is not divisible by factor {factor}")
    blocks = field.values.reshape(c, h // factor, factor, w // factor, factor)
    coarse = np.ascontiguousarray(blocks.mean(axis=(2, 4)))
    coarse.setflags(write=False)
    return GridField(values=coarse, dx=field.dx * factor, channel_names=field.channel_names)


def upsample_nearest(values: np.ndarray, factor: int) -> np.ndarray:
    """Nearest-neighbour upsample of (..., H, W) arrays along the last two axes."""
    factor = int(factor)
    if factor < 1:
        raise NotDivisibleError(f"factor must be a positive integer, got {factor}")
    return np.repeat(np.repeat(values, factor, axis=-2), factor, axis=-1)


@dataclass(frozen=True)
class ChannelStats:
    mean: float
    variance: float
    min: float
    max: float


def field_stats(field: GridField) -> dict:
    """Exact per-channel sample statistics (population variance)."""
    out = {}
    for i, name in enumerate(field.channel_names):
        ch = field.values[i]
        out[name] = ChannelStats(
            mean=float(ch.mean()),
            variance=float(ch.var()),
            min=float(ch.min()),
            max=float(ch.max()),
        )
    return out
