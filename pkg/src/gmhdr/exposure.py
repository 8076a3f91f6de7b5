"""Exposure-stack synthesis, linearization, and classical weighted merge.

The merge is a deterministic triangle-weighted average in the style of the
classical multi-exposure literature. It stands in for any learned estimator:
given an aligned stack it produces an HDR estimate on the reference frame's
radiance scale, from which an initial gain map can be encoded.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gainmap
from .companding import DEFAULT_GAMMA, gamma_decode, gamma_encode
from .core import (
    DimensionMismatchError,
    Ldr8Image,
    LinearImage,
    Transfer,
    dequantize8,
    quantize8,
)

# Weight floor; keeps fully clipped frames from zeroing the denominator.
EPS_W = 1e-3


@dataclass(frozen=True, eq=False)
class ExposureStack:
    """Ordered bracketed frames with their exposure offsets in stops.

    Frames are ordered by strictly increasing ev and exactly one frame sits
    at ev 0; that frame is the reference.
    """

    frames: tuple[Ldr8Image, ...]
    evs: tuple[float, ...]
    gamma: float = DEFAULT_GAMMA

    def __post_init__(self):
        frames = tuple(self.frames)
        evs = tuple(float(e) for e in self.evs)
        if not frames:
            raise ValueError("stack must contain at least one frame")
        if len(frames) != len(evs):
            raise ValueError(f"{len(frames)} frames but {len(evs)} evs")
        if any(b <= a for a, b in zip(evs, evs[1:])):
            raise ValueError(f"evs must be strictly increasing, got {evs}")
        if evs.count(0.0) != 1:
            raise ValueError(f"exactly one frame must sit at ev 0, got evs {evs}")
        if not (self.gamma > 0):
            raise ValueError(f"gamma must be > 0, got {self.gamma}")
        shape = frames[0].data.shape
        for f in frames:
            if f.data.shape != shape:
                raise DimensionMismatchError(f"frame shape {f.data.shape} vs {shape}")
        object.__setattr__(self, "frames", frames)
        object.__setattr__(self, "evs", evs)

    @property
    def reference_index(self) -> int:
        return self.evs.index(0.0)

    @property
    def reference(self) -> Ldr8Image:
        return self.frames[self.reference_index]

    @classmethod
    def from_pairs(cls, pairs, gamma: float = DEFAULT_GAMMA) -> "ExposureStack":
        """Build a stack from (frame, ev) pairs in any order; sorts by ev."""
        pairs = sorted(pairs, key=lambda p: p[1])
        frames = tuple(p[0] for p in pairs)
        evs = tuple(p[1] for p in pairs)
        return cls(frames, evs, gamma)


def synth_stack(hdr: LinearImage, evs, gamma: float = DEFAULT_GAMMA) -> ExposureStack:
    """Render a bracketed LDR stack from ground-truth HDR.

    Each frame is hdr scaled by 2**ev, hard-clipped to [0, 1], gamma encoded
    and quantized. The caller normalizes hdr so the ev=0 exposure covers
    [0, 1]; evs must contain 0.
    """
    evs = sorted(float(e) for e in evs)
    if 0.0 not in evs:
        raise ValueError(f"evs must contain 0, got {evs}")
    frames = []
    for ev in evs:
        scaled = np.clip(hdr.data * 2.0 ** ev, 0.0, 1.0)
        frames.append(Ldr8Image(quantize8(gamma_encode(scaled, gamma)),
                                Transfer.GAMMA_ENCODED))
    return ExposureStack(tuple(frames), tuple(evs), gamma)


def linearize_ldr(frame: Ldr8Image, ev: float, gamma: float = DEFAULT_GAMMA) -> LinearImage:
    """Map a gamma-encoded frame back to the ev=0 radiance scale."""
    if frame.transfer is not Transfer.GAMMA_ENCODED:
        raise ValueError(f"expected a gamma-encoded frame, got {frame.transfer}")
    return LinearImage(gamma_decode(dequantize8(frame.data), gamma) / 2.0 ** float(ev))


def _triangle_weights(z: np.ndarray) -> np.ndarray:
    return np.maximum(EPS_W, 1.0 - np.abs(2.0 * z - 1.0))


def merge_baseline(stack: ExposureStack) -> LinearImage:
    """Triangle-weighted average of the linearized frames.

    Code fractions near mid-range get the highest weight; fully clipped
    samples keep only the EPS_W floor. Where every frame is clipped (all
    weights at the floor) the merge falls back to the linearized reference
    value, since no frame carries information there.
    """
    zs = np.stack([dequantize8(f.data) for f in stack.frames])
    weights = _triangle_weights(zs)
    linear = np.stack([
        linearize_ldr(f, ev, stack.gamma).data
        for f, ev in zip(stack.frames, stack.evs)
    ])
    merged = np.sum(weights * linear, axis=0) / np.sum(weights, axis=0)
    all_clipped = np.all(weights == EPS_W, axis=0)
    reference = linearize_ldr(stack.reference, 0.0, stack.gamma).data
    return LinearImage(np.where(all_clipped, reference, merged))


def initial_gainmap(stack: ExposureStack, *,
                    q_max: float | str = "auto",
                    variant: gainmap.Variant = gainmap.Variant.EXP2,
                    mu: float = 100.0,
                    alpha: float = gainmap.DEFAULT_ALPHA,
                    ) -> tuple[gainmap.GainMap, LinearImage]:
    """Merge the stack and encode the result against the reference frame.

    The base layer is the reference frame in linear code (gamma decoded,
    ev 0, values in [0, 1]). Returns the gain map and the merged estimate.
    """
    merged = merge_baseline(stack)
    base = linearize_ldr(stack.reference, 0.0, stack.gamma)
    gm = gainmap.encode(merged, base, q_max=q_max, variant=variant, mu=mu, alpha=alpha)
    return gm, merged
