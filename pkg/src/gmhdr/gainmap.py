"""Dual-layer gain-map codec.

An HDR image H is represented as an 8-bit base layer L plus an 8-bit gain
map G and reconstructed as

    H = (L + alpha) * expand(1 + G * q_max)

where expand is either exp2 or the extended inverse mu-law curve, G is the
gain map dequantized to [0, 1], and alpha is a small offset that preserves
detail near black. Encoding inverts the same closed form and quantizes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np

from .companding import DEFAULT_MU, mulaw_forward_ext, mulaw_inverse_ext
from .core import (
    DimensionMismatchError,
    LinearImage,
    _frozen,
    dequantize8,
    quantize8,
    require_same_shape,
)

DEFAULT_ALPHA = 1.0 / 64.0

# Floor for the automatic q_max on degenerate (all-dark) inputs.
EPS_Q = 1e-6


class Variant(enum.Enum):
    """Expansion curve used by the codec."""

    EXP2 = "exp2"
    INV_MULAW = "mulaw"


@dataclass(frozen=True)
class GainMapMeta:
    """Parameters needed to invert a gain map.

    clip_fraction is a diagnostic: the fraction of gain samples whose
    continuous value fell outside [0, 1] before clamping at encode time.
    """

    q_max: float
    alpha: float = DEFAULT_ALPHA
    variant: Variant = Variant.EXP2
    mu: float = DEFAULT_MU
    clip_fraction: float = 0.0

    def __post_init__(self):
        if not (self.q_max > 0):
            raise ValueError(f"q_max must be > 0, got {self.q_max}")
        if not (self.alpha > 0):
            raise ValueError(f"alpha must be > 0, got {self.alpha}")
        if not (self.mu > 0):
            raise ValueError(f"mu must be > 0, got {self.mu}")
        if not (0.0 <= self.clip_fraction <= 1.0):
            raise ValueError(f"clip_fraction must lie in [0, 1], got {self.clip_fraction}")
        if not isinstance(self.variant, Variant):
            raise ValueError(f"bad variant: {self.variant!r}")


@dataclass(frozen=True, eq=False)
class GainMap:
    """8-bit normalized gain codes, shape (height, width, 3), plus metadata."""

    data: np.ndarray
    meta: GainMapMeta

    def __post_init__(self):
        data = np.asarray(self.data)
        if data.ndim != 3 or data.shape[2] != 3 or data.shape[0] < 1 or data.shape[1] < 1:
            raise ValueError(f"expected (h, w, 3) array, got shape {data.shape}")
        if data.dtype != np.uint8:
            raise ValueError("gain codes must be uint8")
        object.__setattr__(self, "data", _frozen(data))

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]


def expansion(g, meta: GainMapMeta):
    """Multiplier applied to (base + alpha) for a normalized gain g in [0, 1]."""
    g = np.asarray(g, dtype=np.float64)
    x = 1.0 + g * meta.q_max
    if meta.variant is Variant.EXP2:
        out = np.exp2(x)
    else:
        out = mulaw_inverse_ext(x, meta.mu)
    return out if np.ndim(out) else float(out)


def _compression(ratio: np.ndarray, meta: GainMapMeta) -> np.ndarray:
    # Inverse of expansion: multiplier ratio back to 1 + g*q_max, before
    # the offset/scale removal. ratio == 0 maps to -inf (exp2) or 0 (mu-law),
    # which downstream clamping sends to gain 0.
    if meta.variant is Variant.EXP2:
        with np.errstate(divide="ignore"):
            return np.log2(ratio)
    return mulaw_forward_ext(ratio, meta.mu)


def decode(base: LinearImage, gm: GainMap) -> LinearImage:
    """Reconstruct HDR from a linear-code base layer in [0, 1] and a gain map."""
    if base.data.shape != gm.data.shape:
        raise DimensionMismatchError(f"shape {base.data.shape} vs {gm.data.shape}")
    mult = expansion(dequantize8(gm.data), gm.meta)
    return LinearImage((base.data + gm.meta.alpha) * mult)


def compute_gain_continuous(hdr: LinearImage, base: LinearImage,
                            meta: GainMapMeta) -> tuple[np.ndarray, float]:
    """Continuous normalized gains for hdr against base, clamped to [0, 1].

    Returns (gains, clip_fraction) where clip_fraction is the fraction of
    samples whose unclamped gain fell outside [0, 1]. Nonpositive hdr values
    clamp to gain 0 silently (radiance is nonnegative by construction, so
    that path only guards float dust).
    """
    require_same_shape(hdr, base)
    ratio = hdr.data / (base.data + meta.alpha)
    if not np.all(np.isfinite(ratio)):
        raise ValueError("non-finite hdr/base ratio")
    raw = (_compression(ratio, meta) - 1.0) / meta.q_max
    clip_fraction = float(np.mean((raw < 0.0) | (raw > 1.0)))
    return np.clip(raw, 0.0, 1.0), clip_fraction


def encode(hdr: LinearImage, base: LinearImage, *,
           q_max: float | str = "auto",
           variant: Variant = Variant.EXP2,
           mu: float = DEFAULT_MU,
           alpha: float = DEFAULT_ALPHA) -> GainMap:
    """Quantize hdr against base into an 8-bit gain map.

    With q_max="auto" the scale is the smallest value covering every pixel
    (floored at EPS_Q when no pixel needs positive gain), so nothing clips.
    A fixed numeric q_max is honored as given; out-of-range gains clamp and
    are reported via meta.clip_fraction.
    """
    require_same_shape(hdr, base)
    probe = GainMapMeta(q_max=1.0, alpha=alpha, variant=variant, mu=mu)
    ratio = hdr.data / (base.data + alpha)
    if not np.all(np.isfinite(ratio)):
        raise ValueError("non-finite hdr/base ratio")
    raw = _compression(ratio, probe) - 1.0
    if isinstance(q_max, str):
        if q_max != "auto":
            raise ValueError(f"q_max must be a positive number or 'auto', got {q_max!r}")
        q = max(EPS_Q, float(np.max(raw)))
    else:
        q = float(q_max)
    meta = GainMapMeta(q_max=q, alpha=alpha, variant=variant, mu=mu)
    gains = raw / q
    clip_fraction = float(np.mean((gains < 0.0) | (gains > 1.0)))
    codes = quantize8(np.clip(gains, 0.0, 1.0))
    return GainMap(codes, replace(meta, clip_fraction=clip_fraction))
