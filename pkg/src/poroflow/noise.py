"""Composite strain noise: multiplicative amplitude modulation plus additive Gaussian.

    noisy = am_field * truth + additive_field

``am_field`` is a mean-one lognormal field, ``exp(am_sigma * S - am_sigma**2 / 2)``,
where ``S`` is white Gaussian noise smoothed to ``am_corr_len`` pixels and
re-standardized to zero mean, unit variance. ``additive_field`` is white
Gaussian noise scaled so that ``10 log10(sum(truth**2) / sum(g**2))`` equals
``snr_db`` in expectation. ``snr_db = inf`` disables the additive part.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DimensionError, DomainError
from .grid import as_grid, gaussian_smooth


@dataclass(frozen=True)
class NoiseConfig:
    snr_db: float = 40.0
    am_sigma: float = 0.1
    am_corr_len: float = 2.0
    seed: int = 0

    def __post_init__(self):
        if math.isnan(self.snr_db) or self.snr_db == -math.inf:
            raise ConfigError(f"snr_db must be finite or +inf, got {self.snr_db}")
        if not self.am_sigma >= 0 or not math.isfinite(self.am_sigma):
            raise ConfigError(f"am_sigma must be >= 0, got {self.am_sigma}")
        if not self.am_corr_len >= 0 or not math.isfinite(self.am_corr_len):
            raise ConfigError(f"am_corr_len must be >= 0, got {self.am_corr_len}")


@dataclass(frozen=True)
class NoiseRealization:
    am_field: np.ndarray
    additive_field: np.ndarray
    noisy: np.ndarray


def correlated_normal(rng: np.random.Generator, shape, corr_len: float) -> np.ndarray:
    """Zero-mean, unit-variance Gaussian field with correlation length ``corr_len``."""
    white = rng.standard_normal(shape)
    if corr_len > 0:
        size = 2 * int(math.ceil(3.0 * corr_len)) + 1
        white = gaussian_smooth(white, size, corr_len)
    std = white.std()
    if std == 0:
        return np.zeros(shape)
    return (white - white.mean()) / std


def corrupt(truth, cfg: NoiseConfig) -> NoiseRealization:
    truth = as_grid(truth, name="truth")
    energy = float(np.sum(truth**2))
    if math.isfinite(cfg.snr_db) and energy == 0.0:
        raise DomainError("SNR is undefined for an all-zero truth grid")

    # Both draws happen unconditionally so one seed gives the same streams
    # whatever am_sigma / snr_db are.
    rng = np.random.default_rng(cfg.seed)
    s = correlated_normal(rng, truth.shape, cfg.am_corr_len)
    white = rng.standard_normal(truth.shape)

    if cfg.am_sigma > 0:
        am = np.exp(cfg.am_sigma * s - 0.5 * cfg.am_sigma**2)
    else:
        am = np.ones_like(truth)

    if math.isfinite(cfg.snr_db):
        noise_var = energy / (truth.size * 10.0 ** (cfg.snr_db / 10.0))
        additive = math.sqrt(noise_var) * white
    else:
        additive = np.zeros_like(truth)

    modulated = am * truth
    noisy = modulated + additive
    # Re-derive g from the rounded sum so noisy - am*truth == g holds bit-exactly.
    return NoiseRealization(am_field=am, additive_field=noisy - modulated, noisy=noisy)


def measure_snr(truth, noisy) -> float:
    """``10 log10(sum(truth**2) / sum((noisy - truth)**2))`` in dB; ``inf`` if equal."""
    truth = as_grid(truth, name="truth")
    noisy = as_grid(noisy, name="noisy")
    if truth.shape != noisy.shape:
        raise DimensionError(f"shape mismatch: truth {truth.shape} vs noisy {noisy.shape}")
    signal = float(np.sum(truth**2))
    if signal == 0.0:
        raise DomainError("SNR is undefined for an all-zero truth grid")
    residual = float(np.sum((noisy - truth) ** 2))
    if residual == 0.0:
        return math.inf
    return 10.0 * math.log10(signal / residual)
