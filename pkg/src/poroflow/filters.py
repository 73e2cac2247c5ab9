"""Uniform dispatch over the four strain filters compared by the benchmark."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .errors import ConfigError
from .grid import as_grid
from .kalman import KalmanConfig, apply_kalman
from .ncdf import NcdfConfig, run_ncdf

METHODS = ("median", "kalman", "ncdf", "proposed")


@dataclass(frozen=True)
class FilterMethod:
    tag: str = "proposed"
    kalman_cfg: KalmanConfig = field(default_factory=KalmanConfig)
    ncdf_cfg: NcdfConfig = field(default_factory=NcdfConfig)
    median_size: int = 5

    def __post_init__(self):
        if self.tag not in METHODS:
            raise ConfigError(f"unknown filter method {self.tag!r}; valid methods: {', '.join(METHODS)}")
        if int(self.median_size) != self.median_size or self.median_size < 3 or self.median_size % 2 == 0:
            raise ConfigError(f"median_size must be an odd integer >= 3, got {self.median_size}")


def median_filter(grid, size: int = 5) -> np.ndarray:
    """Median of each ``size x size`` neighbourhood, replicate padding."""
    if int(size) != size or size < 1 or size % 2 == 0:
        raise ConfigError(f"median size must be a positive odd integer, got {size}")
    return ndimage.median_filter(as_grid(grid), size=int(size), mode="nearest")


def apply_filter(grid, method: FilterMethod | str) -> np.ndarray:
    if isinstance(method, str):
        method = FilterMethod(tag=method)
    arr = as_grid(grid)
    if method.tag == "median":
        return median_filter(arr, method.median_size)
    if method.tag == "kalman":
        return apply_kalman(arr, method.kalman_cfg)
    if method.tag == "ncdf":
        return run_ncdf(arr, method.ncdf_cfg)
    return run_ncdf(apply_kalman(arr, method.kalman_cfg), method.ncdf_cfg)
