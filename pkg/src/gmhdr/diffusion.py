"""Noise-schedule algebra: forward noising and one-step clean-signal recovery.

Latents are plain float64 arrays of shape (channels, height, width). There is
deliberately no neural predictor here; the noise estimate is an input, which
makes the closed-form algebra testable in isolation:

    z_t   = sqrt(abar_t) * z0 + sqrt(1 - abar_t) * eps
    z0^   = (z_t - sqrt(1 - abar_t) * eps^) / sqrt(abar_t)
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import DimensionMismatchError

# Conventional linear DDPM schedule endpoints.
DEFAULT_STEPS = 1000
DEFAULT_BETA_START = 1e-4
DEFAULT_BETA_END = 0.02


@dataclass(frozen=True, eq=False)
class NoiseSchedule:
    """Per-step beta values with their cumulative alpha-bar products."""

    betas: np.ndarray
    alpha_bars: np.ndarray = field(init=False)

    def __post_init__(self):
        betas = np.asarray(self.betas, dtype=np.float64)
        if betas.ndim != 1 or betas.size < 1:
            raise ValueError("betas must be a nonempty 1-d sequence")
        if np.any(betas <= 0) or np.any(betas >= 1):
            raise ValueError("every beta must lie in (0, 1)")
        alpha_bars = np.cumprod(1.0 - betas)
        for a in (betas, alpha_bars):
            a.flags.writeable = False
        object.__setattr__(self, "betas", betas)
        object.__setattr__(self, "alpha_bars", alpha_bars)

    @property
    def num_steps(self) -> int:
        return self.betas.size


def linear_schedule(num_steps: int = DEFAULT_STEPS,
                    beta_start: float = DEFAULT_BETA_START,
                    beta_end: float = DEFAULT_BETA_END) -> NoiseSchedule:
    """Betas linearly interpolated between the endpoints, inclusive."""
    if num_steps < 1:
        raise ValueError(f"num_steps must be >= 1, got {num_steps}")
    if not (0 < beta_start <= beta_end < 1):
        raise ValueError(f"need 0 < beta_start <= beta_end < 1, got "
                         f"({beta_start}, {beta_end})")
    if num_steps == 1:
        betas = np.array([beta_start])
    else:
        betas = np.linspace(beta_start, beta_end, num_steps)
    return NoiseSchedule(betas)


def _check(sched: NoiseSchedule, t: int, *grids: np.ndarray) -> None:
    if not (0 <= t < sched.num_steps):
        raise ValueError(f"t must lie in [0, {sched.num_steps}), got {t}")
    shape = grids[0].shape
    for g in grids[1:]:
        if g.shape != shape:
            raise DimensionMismatchError(f"shape {g.shape} vs {shape}")


def q_sample(z0: np.ndarray, t: int, eps: np.ndarray,
             sched: NoiseSchedule) -> np.ndarray:
    """Forward-noise a clean latent to step t with the given noise draw."""
    z0 = np.asarray(z0, dtype=np.float64)
    eps = np.asarray(eps, dtype=np.float64)
    _check(sched, t, z0, eps)
    abar = sched.alpha_bars[t]
    return np.sqrt(abar) * z0 + np.sqrt(1.0 - abar) * eps


def one_step_x0(z_t: np.ndarray, eps_hat: np.ndarray, t: int,
                sched: NoiseSchedule) -> np.ndarray:
    """Recover the clean latent from a noised one and a noise estimate."""
    z_t = np.asarray(z_t, dtype=np.float64)
    eps_hat = np.asarray(eps_hat, dtype=np.float64)
    _check(sched, t, z_t, eps_hat)
    abar = sched.alpha_bars[t]
    return (z_t - np.sqrt(1.0 - abar) * eps_hat) / np.sqrt(abar)
