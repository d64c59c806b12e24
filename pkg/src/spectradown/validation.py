"""Input-validation helpers, in the spirit of sklearn's check_array."""

from __future__ import annotations

import numpy as np

from .errors import (
    ChannelOutOfRangeError,
    DimensionMismatchError,
    GridMismatchError,
    InvalidSpacingError,
    NonFiniteValueError,
)


def as_float_array(values, name: str = "values") -> np.ndarray:
    """Coerce to a C-contiguous float64 array, rejecting non-finite entries."""
    arr = np.ascontiguousarray(values, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise NonFiniteValueError(f"{name} contains NaN or infinite entries")
    return arr


def check_spacing(dx) -> float:
    dx = float(dx)
    if not np.isfinite(dx) or dx <= 0.0:
        raise InvalidSpacingError(f"grid spacing must be positive and finite, got {dx}")
    return dx


def check_grid_dims(h: int, w: int) -> tuple[int, int]:
    """Derivatives need at least two points per axis."""
    h, w = int(h), int(w)
    if h < 2 or w < 2:
        raise DimensionMismatchError(f"grid must be at least 2x2, got {h}x{w}")
    return h, w


def check_channel(field, channel) -> int:
    """Resolve a channel given as index or name; raise if out of range."""
    names = field.channel_names
    if isinstance(channel, str):
        try:
            return names.index(channel)
        except ValueError:
            raise ChannelOutOfRangeError(
                f"channel {channel!r} not in {list(names)}"
            ) from None
    idx = int(channel)
    if not 0 <= idx < len(names):
        raise ChannelOutOfRangeError(
            f"channel index {idx} out of range for {len(names)} channels"
        )
    return idx


def check_matching_grids(a, b, names: tuple[str, str] = ("first", "second")) -> None:
    """Require identical (C, H, W) and dx for two GridFields."""
    if a.values.shape != b.values.shape:
        raise GridMismatchError(
            f"{names[0]} field has shape {a.values.shape}, "
            f"{names[1]} has {b.values.shape}"
        )
    if not np.isclose(a.dx, b.dx, rtol=1e-12, atol=0.0):
        raise GridMismatchError(f"grid spacings differ: {a.dx} vs {b.dx}")


def check_same_shape(a: np.ndarray, b: np.ndarray, what: str = "arrays") -> None:
    if a.shape != b.shape:
        raise GridMismatchError(f"{what} have shapes {a.shape} vs {b.shape}")
