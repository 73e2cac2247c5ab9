"""2-D grids and the discrete operators shared by the filters.

A scalar grid is a 2-D ``float64`` ndarray (row-major), a complex grid a
2-D ``complex128`` ndarray. Every stencil uses replicate (Neumann)
boundary extension: the value at the edge is repeated outward.
"""

from __future__ import annotations

import numpy as np
from scipy import ndimage

from .errors import ConfigError, DimensionError, DomainError


def as_grid(values, *, name: str = "grid", complex_ok: bool = False) -> np.ndarray:
    """Validate and return ``values`` as a finite 2-D float (or complex) array."""
    arr = np.asarray(values)
    if arr.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionError(f"{name} must be non-empty, got shape {arr.shape}")
    if np.iscomplexobj(arr):
        if not complex_ok:
            raise DomainError(f"{name} must be real-valued")
        arr = arr.astype(np.complex128, copy=False)
    else:
        arr = arr.astype(np.float64, copy=False)
    if not np.all(np.isfinite(arr)):
        bad = tuple(int(k) for k in np.argwhere(~np.isfinite(arr))[0])
        raise DomainError(f"{name} contains a non-finite value at pixel {bad}")
    return arr


def _require_min_shape(arr: np.ndarray, minimum: int = 3) -> None:
    if arr.shape[0] < minimum or arr.shape[1] < minimum:
        raise DimensionError(
            f"grid must be at least {minimum}x{minimum}, got {arr.shape[0]}x{arr.shape[1]}"
        )


def laplacian(grid) -> np.ndarray:
    """5-point discrete Laplacian with replicate boundaries."""
    arr = as_grid(grid, complex_ok=True)
    _require_min_shape(arr)
    p = np.pad(arr, 1, mode="edge")
    return p[2:, 1:-1] + p[:-2, 1:-1] + p[1:-1, 2:] + p[1:-1, :-2] - 4.0 * arr


def gradient(grid) -> tuple[np.ndarray, np.ndarray]:
    """Central-difference gradient ``(d/drow, d/dcol)``, per pixel.

    Same axis order as :func:`numpy.gradient`; edges use the replicated
    neighbour, so the edge derivative is half the one-sided difference.
    """
    arr = as_grid(grid, complex_ok=True)
    _require_min_shape(arr)
    p = np.pad(arr, 1, mode="edge")
    d_row = (p[2:, 1:-1] - p[:-2, 1:-1]) / 2.0
    d_col = (p[1:-1, 2:] - p[1:-1, :-2]) / 2.0
    return d_row, d_col


def gaussian_kernel(kernel_size: int, sigma: float) -> np.ndarray:
    """Sampled, normalized ``kernel_size x kernel_size`` Gaussian."""
    g = gaussian_kernel_1d(kernel_size, sigma)
    return np.outer(g, g)


def gaussian_kernel_1d(kernel_size: int, sigma: float) -> np.ndarray:
    if int(kernel_size) != kernel_size or kernel_size < 1 or kernel_size % 2 == 0:
        raise ConfigError(f"kernel_size must be a positive odd integer, got {kernel_size}")
    if not sigma > 0 or not np.isfinite(sigma):
        raise ConfigError(f"sigma must be positive and finite, got {sigma}")
    half = int(kernel_size) // 2
    x = np.arange(-half, half + 1, dtype=np.float64)
    g = np.exp(-0.5 * (x / sigma) ** 2)
    return g / g.sum()


def gaussian_smooth(grid, kernel_size: int, sigma: float) -> np.ndarray:
    """Convolve with a normalized sampled Gaussian, replicate boundaries.

    The 2-D kernel is the outer product of the 1-D one, so it is applied
    as two 1-D passes.
    """
    g = gaussian_kernel_1d(kernel_size, sigma)
    arr = as_grid(grid)
    out = ndimage.correlate1d(arr, g, axis=0, mode="nearest")
    return ndimage.correlate1d(out, g, axis=1, mode="nearest")
