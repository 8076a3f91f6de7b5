"""Ground-truth degradation mask: tone-mapped pixel-consistency thresholding.

A pixel is flagged as degraded when the mean absolute RGB difference between
the tone-mapped ground truth and the tone-mapped estimate exceeds a fixed
threshold. Static well-exposed regions reconstruct consistently, so the mask
concentrates on motion, misalignment, and saturation artifacts.
"""

from __future__ import annotations

import numpy as np

from .companding import DEFAULT_MU, mulaw_forward
from .core import BoolMask, LinearImage, mean_abs_channel_diff, require_same_shape

DEFAULT_SIGMA = 4.0 / 255.0


def _shared_scale(a: LinearImage, b: LinearImage) -> float:
    # One scale for both images so the comparison happens on a common [0, 1]
    # range; images already within [0, 1] are left untouched.
    return max(1.0, float(a.data.max()), float(b.data.max()))


def tonemapped_pair(a: LinearImage, b: LinearImage, mu: float = DEFAULT_MU):
    """Normalize two images by their shared scale and mu-law tone map both."""
    require_same_shape(a, b)
    scale = _shared_scale(a, b)
    ta = mulaw_forward(np.clip(a.data / scale, 0.0, 1.0), mu)
    tb = mulaw_forward(np.clip(b.data / scale, 0.0, 1.0), mu)
    return LinearImage(ta), LinearImage(tb)


def compute_mask(hdr_gt: LinearImage, hdr_est: LinearImage, *,
                 sigma: float = DEFAULT_SIGMA, mu: float = DEFAULT_MU) -> BoolMask:
    """Flag pixels whose tone-mapped mean RGB difference strictly exceeds sigma."""
    if not (sigma > 0):
        raise ValueError(f"sigma must be > 0, got {sigma}")
    ta, tb = tonemapped_pair(hdr_gt, hdr_est, mu)
    return BoolMask(mean_abs_channel_diff(ta, tb) > sigma)


def mask_fraction(mask: BoolMask) -> float:
    """Fraction of flagged pixels."""
    return float(np.mean(mask.data))


def mask_agreement(pred: BoolMask, gt: BoolMask) -> dict[str, float]:
    """Precision, recall, and IoU of a predicted mask against ground truth.

    Empty denominators score 1.0: an all-false prediction has perfect
    precision, an all-false ground truth is perfectly recalled, and two
    empty masks coincide.
    """
    require_same_shape(pred, gt)
    p, g = pred.data, gt.data
    tp = int(np.sum(p & g))
    fp = int(np.sum(p & ~g))
    fn = int(np.sum(~p & g))
    return {
        "precision": tp / (tp + fp) if tp + fp else 1.0,
        "recall": tp / (tp + fn) if tp + fn else 1.0,
        "iou": tp / (tp + fp + fn) if tp + fp + fn else 1.0,
    }
