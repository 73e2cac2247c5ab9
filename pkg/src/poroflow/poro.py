"""Fluid pressure and permeability-normalized fluid velocity from volumetric strain."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DimensionError, DomainError
from .grid import as_grid, gradient


@dataclass(frozen=True)
class PoroConfig:
    compression_modulus_k: float
    center_row: float
    center_col: float
    steady_state_index: int = -1

    def __post_init__(self):
        if not self.compression_modulus_k > 0:
            raise ConfigError(f"compression modulus must be positive, got {self.compression_modulus_k}")


@dataclass(frozen=True)
class PoroResult:
    t: float
    pressure: np.ndarray
    velocity: np.ndarray


def volumetric_strain(axial, lateral) -> np.ndarray:
    """In-plane volumetric strain, ``axial + lateral``."""
    axial = as_grid(axial, name="axial")
    lateral = as_grid(lateral, name="lateral")
    if axial.shape != lateral.shape:
        raise DimensionError(f"shape mismatch: axial {axial.shape} vs lateral {lateral.shape}")
    return axial + lateral


def compute_pressure(vol_strain_t, vol_strain_inf, cfg: PoroConfig) -> np.ndarray:
    """``p = -K (eps(t) - eps(inf))``."""
    eps_t = as_grid(vol_strain_t, name="vol_strain_t")
    eps_inf = as_grid(vol_strain_inf, name="vol_strain_inf")
    if eps_t.shape != eps_inf.shape:
        raise DimensionError(f"shape mismatch: {eps_t.shape} vs {eps_inf.shape}")
    return -cfg.compression_modulus_k * (eps_t - eps_inf)


def radial_unit_vectors(shape, center_row: float, center_col: float):
    i, j = np.mgrid[0 : shape[0], 0 : shape[1]].astype(np.float64)
    dr, dc = i - center_row, j - center_col
    R = np.hypot(dr, dc)
    with np.errstate(invalid="ignore", divide="ignore"):
        ur = np.where(R > 0, dr / R, 0.0)
        uc = np.where(R > 0, dc / R, 0.0)
    return ur, uc


def compute_velocity(pressure, cfg: PoroConfig) -> np.ndarray:
    """``v = -dp/dR`` along the unit vector pointing away from the center.

    Zero at the center pixel itself, where the radial direction is undefined.
    """
    p = as_grid(pressure, name="pressure")
    rows, cols = p.shape
    if not (0 <= cfg.center_row <= rows - 1 and 0 <= cfg.center_col <= cols - 1):
        raise ConfigError(f"center ({cfg.center_row}, {cfg.center_col}) lies outside the {rows}x{cols} grid")
    d_r, d_c = gradient(p)
    ur, uc = radial_unit_vectors(p.shape, cfg.center_row, cfg.center_col)
    return -(d_r * ur + d_c * uc)


def estimate_poro_series(filtered_vol_strains, cfg: PoroConfig) -> list[PoroResult]:
    """Pressure and velocity for every frame of ``[(t, vol_strain), ...]``.

    The frame at ``cfg.steady_state_index`` is the drained reference.
    """
    frames = list(filtered_vol_strains)
    if len(frames) < 2:
        raise DomainError("need at least 2 frames: one of them must serve as the steady state")
    try:
        _, eps_inf = frames[cfg.steady_state_index]
    except IndexError:
        raise DomainError(
            f"steady_state_index {cfg.steady_state_index} out of range for {len(frames)} frames"
        ) from None
    out = []
    for t, eps in frames:
        p = compute_pressure(eps, eps_inf, cfg)
        out.append(PoroResult(t=float(t), pressure=p, velocity=compute_velocity(p, cfg)))
    return out
