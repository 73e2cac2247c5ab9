"""Lateral Kalman smoothing of a strain image (removes additive Gaussian noise).

Each row is filtered independently, left to right, under a random-walk
state model ``I[j] = I[j-1] + r[j]``::

    prior      I_bar[j] = I_hat[j-1]
    q_bar[j]   = q_hat[j-1] + sigma_r2[j]
    gain       = q_bar / (q_bar + sigma_g2)
    I_hat[j]   = I_bar[j] + gain * (rho[j] - I_bar[j])
    q_hat[j]   = (1 - gain) * q_bar[j]

with ``I_hat[0] = rho[0]`` and ``q_hat[0] = 0``. ``sigma_g2`` is the variance
of the whole noisy image; ``sigma_r2[j]`` is the squared difference of
Gaussian-weighted block means at columns ``j - 1`` and ``j``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import ConfigError, DimensionError, DomainError
from .grid import as_grid, gaussian_smooth

SIGMA_R2_FLOOR = 1e-20


@dataclass(frozen=True)
class KalmanConfig:
    window_wk: int = 13
    block_size: int = 3
    block_kernel_sigma: float = 0.6
    # Subtract a window_wk-wide running row mean before the recursion and
    # add it back afterwards. Off by default; the recursion does not use W_k.
    detrend: bool = False

    def __post_init__(self):
        for name in ("window_wk", "block_size"):
            v = getattr(self, name)
            if int(v) != v or v < 3 or v % 2 == 0:
                raise ConfigError(f"{name} must be an odd integer >= 3, got {v}")
        if not self.block_kernel_sigma > 0:
            raise ConfigError(f"block_kernel_sigma must be positive, got {self.block_kernel_sigma}")


@dataclass(frozen=True)
class KalmanTrace:
    """Per-pixel recursion internals; column 0 holds the initial state."""

    estimate: np.ndarray
    i_prior: np.ndarray
    q_prior: np.ndarray
    q_post: np.ndarray
    gain: np.ndarray
    sigma_g2: float
    sigma_r2: np.ndarray


def estimate_sigma_g2(noisy) -> float:
    """Population variance of every pixel of the noisy image."""
    arr = as_grid(noisy, name="noisy")
    if arr.size < 2:
        raise DomainError("need at least 2 pixels to estimate a variance")
    return float(np.var(arr))


def block_means(noisy, cfg: KalmanConfig = KalmanConfig()) -> np.ndarray:
    return gaussian_smooth(noisy, cfg.block_size, cfg.block_kernel_sigma)


def sigma_r2_map(noisy, cfg: KalmanConfig = KalmanConfig()) -> np.ndarray:
    """Process-noise variance for every pixel; column 0 is unused and set to 0."""
    mu = block_means(noisy, cfg)
    out = np.zeros_like(mu)
    out[:, 1:] = (mu[:, :-1] - mu[:, 1:]) ** 2
    return out


def estimate_sigma_r2(noisy, i: int, j: int, cfg: KalmanConfig = KalmanConfig()) -> float:
    arr = as_grid(noisy, name="noisy")
    if j < 1:
        raise DomainError("sigma_r2 is defined for j >= 1; column 0 initializes the recursion")
    if not (0 <= i < arr.shape[0] and j < arr.shape[1]):
        raise DimensionError(f"pixel ({i}, {j}) outside {arr.shape}")
    mu = block_means(arr, cfg)
    return float((mu[i, j - 1] - mu[i, j]) ** 2)


def kalman_trace(noisy, cfg: KalmanConfig = KalmanConfig(), sigma_g2=None, sigma_r2=None) -> KalmanTrace:
    """Run the recursion on every row at once and keep all intermediate state.

    ``sigma_g2`` / ``sigma_r2`` override the data-driven estimates (a scalar
    ``sigma_r2`` is broadcast to every pixel).
    """
    rho = as_grid(noisy, name="noisy")
    rows, cols = rho.shape
    if cols < 2:
        raise DimensionError("Kalman filtering needs at least 2 columns")

    trend = None
    if cfg.detrend:
        trend = ndimage.uniform_filter1d(rho, cfg.window_wk, axis=1, mode="nearest")
        rho = rho - trend

    if sigma_g2 is None:
        sigma_g2 = estimate_sigma_g2(rho)
    if sigma_r2 is None:
        sigma_r2 = sigma_r2_map(rho, cfg)
    else:
        sigma_r2 = np.broadcast_to(np.asarray(sigma_r2, dtype=np.float64), rho.shape)
    sr2 = np.maximum(sigma_r2, SIGMA_R2_FLOOR)

    est = np.empty_like(rho)
    i_prior = np.empty_like(rho)
    q_prior = np.zeros_like(rho)
    q_post = np.zeros_like(rho)
    gain = np.zeros_like(rho)

    est[:, 0] = rho[:, 0]
    i_prior[:, 0] = rho[:, 0]
    q_hat = np.zeros(rows)
    for j in range(1, cols):
        prior = est[:, j - 1]
        q_bar = q_hat + sr2[:, j]
        g = q_bar / (q_bar + sigma_g2)
        est[:, j] = prior + g * (rho[:, j] - prior)
        q_hat = (1.0 - g) * q_bar
        i_prior[:, j] = prior
        q_prior[:, j] = q_bar
        q_post[:, j] = q_hat
        gain[:, j] = g

    if trend is not None:
        est = est + trend
    return KalmanTrace(est, i_prior, q_prior, q_post, gain, float(sigma_g2), np.asarray(sigma_r2))


def apply_kalman(noisy, cfg: KalmanConfig = KalmanConfig()) -> np.ndarray:
    return kalman_trace(noisy, cfg).estimate
