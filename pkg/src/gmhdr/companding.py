"""Scalar transfer functions: mu-law, gamma, and PU21 perceptual encoding.

Everything here is a pure elementwise function accepting scalars or numpy
arrays and returning the same shape.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_MU = 100.0
DEFAULT_GAMMA = 2.2

# PU21 valid luminance range in cd/m^2.
PU21_L_MIN = 0.005
PU21_L_MAX = 10000.0


def _check_mu(mu: float) -> float:
    if not (mu > 0):
        raise ValueError(f"mu must be > 0, got {mu}")
    return float(mu)


def mulaw_forward(x, mu: float = DEFAULT_MU):
    """Compress [0, 1] with T(x) = ln(1 + mu*x) / ln(1 + mu).

    Values above 1 are clamped (upstream float dust can exceed 1 by ulps);
    negative input is a domain error.
    """
    mu = _check_mu(mu)
    x = np.asarray(x, dtype=np.float64)
    if np.any(x < 0):
        raise ValueError("mu-law input must be >= 0")
    x = np.minimum(x, 1.0)
    out = np.log1p(mu * x) / math.log1p(mu)
    return out if out.ndim else float(out)


def mulaw_inverse(y, mu: float = DEFAULT_MU):
    """Expand [0, 1] with R(y) = (e^(y*ln(1+mu)) - 1) / mu, inverse of T."""
    mu = _check_mu(mu)
    y = np.asarray(y, dtype=np.float64)
    if np.any(y < 0) or np.any(y > 1):
        raise ValueError("mu-law inverse input must lie in [0, 1]")
    out = np.expm1(y * math.log1p(mu)) / mu
    return out if out.ndim else float(out)


def mulaw_forward_ext(y, mu: float = DEFAULT_MU):
    """T extended past 1 by the same closed form; defined for all y >= 0."""
    mu = _check_mu(mu)
    y = np.asarray(y, dtype=np.float64)
    out = np.log1p(mu * y) / math.log1p(mu)
    return out if out.ndim else float(out)


def mulaw_inverse_ext(x, mu: float = DEFAULT_MU):
    """R extended past 1 by the same closed form; defined for all x >= 0."""
    mu = _check_mu(mu)
    x = np.asarray(x, dtype=np.float64)
    out = np.expm1(x * math.log1p(mu)) / mu
    return out if out.ndim else float(out)


def gamma_decode(code, gamma: float = DEFAULT_GAMMA):
    """Gamma-encoded code in [0, 1] to linear: code ** gamma."""
    if not (gamma > 0):
        raise ValueError(f"gamma must be > 0, got {gamma}")
    out = np.power(np.asarray(code, dtype=np.float64), gamma)
    return out if out.ndim else float(out)


def gamma_encode(x, gamma: float = DEFAULT_GAMMA):
    """Linear value in [0, 1] to gamma-encoded code: x ** (1/gamma)."""
    if not (gamma > 0):
        raise ValueError(f"gamma must be > 0, got {gamma}")
    out = np.power(np.asarray(x, dtype=np.float64), 1.0 / gamma)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class Pu21Params:
    """One PU21 fit: seven coefficients plus the fit's name.

    The constructor checks that the fit is strictly increasing on a log grid
    spanning the valid luminance range.
    """

    p1: float
    p2: float
    p3: float
    p4: float
    p5: float
    p6: float
    p7: float
    variant: str = "banding_glare"

    def __post_init__(self):
        grid = np.logspace(math.log10(PU21_L_MIN), math.log10(PU21_L_MAX), 1000)
        vals = _pu21_eval(grid, self)
        if not np.all(np.diff(vals) > 0):
            raise ValueError(f"PU21 fit {self.variant!r} is not strictly increasing")


def _pu21_eval(y: np.ndarray, p: Pu21Params) -> np.ndarray:
    yp = np.power(y, p.p4)
    return p.p7 * (np.power((p.p1 + p.p2 * yp) / (1.0 + p.p3 * yp), p.p5) - p.p6)


# Coefficients of the published PU21 fits (metric_par order p1..p7).
PU21_FITS = {
    "banding": Pu21Params(
        1.070275272, 0.4088273932, 0.153224308, 0.2520326168,
        1.063512885, 1.14115047, 521.4527484, variant="banding"),
    "banding_glare": Pu21Params(
        0.353487901, 0.3734658629, 8.277049286e-05, 0.9062562627,
        0.09150303166, 0.9099517204, 596.3148142, variant="banding_glare"),
    "peaks": Pu21Params(
        1.043882782, 0.6459495343, 0.3194584211, 0.374025247,
        1.114783422, 1.095360363, 384.9217577, variant="peaks"),
    "peaks_glare": Pu21Params(
        816.885024, 1479.463946, 0.001253215609, 0.9329636822,
        0.06746643971, 1.573435413, 419.6006374, variant="peaks_glare"),
}

PU21_DEFAULT = PU21_FITS["banding_glare"]


def pu21_encode(y, params: Pu21Params = PU21_DEFAULT):
    """Absolute luminance in cd/m^2 to perceptually uniform units.

    Input is clamped to [0.005, 10000] cd/m^2, the fit's valid range.
    """
    y = np.asarray(y, dtype=np.float64)
    if not np.all(np.isfinite(y)):
        raise ValueError("luminance must be finite")
    out = _pu21_eval(np.clip(y, PU21_L_MIN, PU21_L_MAX), params)
    return out if out.ndim else float(out)
