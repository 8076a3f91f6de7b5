"""Image containers and elementwise utilities shared by every other module.

Conventions used throughout the package: channel order is RGB, arrays are
row-major with the origin at the top-left, and all internal arithmetic is
double precision. Containers are immutable after construction (their numpy
buffers are marked read-only), so every operation in the package is pure and
safe to call concurrently.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np


class DimensionMismatchError(ValueError):
    """Two grids that must share dimensions do not."""


class MetadataMismatchError(ValueError):
    """Two artifacts that must share metadata (variant, declared size) do not."""


class Transfer(enum.Enum):
    """Transfer-function tag of an 8-bit image."""

    GAMMA_ENCODED = "gamma"
    LINEAR_CODE = "linear"


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class LinearImage:
    """Nonnegative linear RGB radiance, shape (height, width, 3), float64."""

    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.float64)
        if data.ndim != 3 or data.shape[2] != 3 or data.shape[0] < 1 or data.shape[1] < 1:
            raise ValueError(f"expected (h, w, 3) array, got shape {data.shape}")
        if not np.all(np.isfinite(data)):
            raise ValueError("radiance values must be finite")
        if np.any(data < 0):
            raise ValueError("radiance values must be >= 0")
        object.__setattr__(self, "data", _frozen(data))

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]


@dataclass(frozen=True, eq=False)
class Ldr8Image:
    """8-bit RGB codes, shape (height, width, 3), with a transfer-function tag."""

    data: np.ndarray
    transfer: Transfer = Transfer.GAMMA_ENCODED

    def __post_init__(self):
        data = np.asarray(self.data)
        if data.ndim != 3 or data.shape[2] != 3 or data.shape[0] < 1 or data.shape[1] < 1:
            raise ValueError(f"expected (h, w, 3) array, got shape {data.shape}")
        if data.dtype != np.uint8:
            if not np.issubdtype(data.dtype, np.integer):
                raise ValueError("codes must be integers")
            if np.any(data < 0) or np.any(data > 255):
                raise ValueError("codes must lie in [0, 255]")
            data = data.astype(np.uint8)
        if not isinstance(self.transfer, Transfer):
            raise ValueError(f"bad transfer tag: {self.transfer!r}")
        object.__setattr__(self, "data", _frozen(data))

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]


@dataclass(frozen=True, eq=False)
class BoolMask:
    """Per-pixel boolean grid, shape (height, width)."""

    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data)
        if data.ndim != 2 or data.shape[0] < 1 or data.shape[1] < 1:
            raise ValueError(f"expected (h, w) array, got shape {data.shape}")
        object.__setattr__(self, "data", _frozen(data.astype(bool)))

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]


def require_same_shape(a, b) -> None:
    """Raise DimensionMismatchError unless the two containers share dimensions."""
    if a.data.shape != b.data.shape:
        raise DimensionMismatchError(f"shape {a.data.shape} vs {b.data.shape}")


def map_pixels(img: LinearImage, f) -> LinearImage:
    """Apply a scalar function to every channel value of ``img``.

    ``f`` must be total on [0, inf) and return finite nonnegative values.
    """
    out = np.frompyfunc(f, 1, 1)(img.data).astype(np.float64)
    return LinearImage(out)


def mean_abs_channel_diff(a: LinearImage, b: LinearImage) -> np.ndarray:
    """Per-pixel mean over RGB of the absolute channel difference, shape (h, w)."""
    require_same_shape(a, b)
    return np.abs(a.data - b.data).mean(axis=2)


def quantize8(x):
    """Map reals to 8-bit codes: round(clamp(x, 0, 1) * 255), half away from zero.

    Accepts scalars or arrays. After clamping the argument is nonnegative, so
    half-away-from-zero rounding reduces to floor(v + 0.5).
    """
    v = np.clip(np.asarray(x, dtype=np.float64), 0.0, 1.0) * 255.0
    out = np.floor(v + 0.5).astype(np.uint8)
    return out if out.ndim else np.uint8(out)


def dequantize8(v):
    """Map 8-bit codes back to [0, 1] fractions (v / 255)."""
    out = np.asarray(v, dtype=np.float64) / 255.0
    return out if out.ndim else float(out)
