"""Kalman + nonlinear complex diffusion filtering of strain elastograms and
poroelastographic fluid pressure / velocity estimation."""

__version__ = "0.1.0"

from .errors import ConfigError, DimensionError, DomainError, FormatError, NumericalError, PoroflowError
from .filters import FilterMethod, apply_filter, median_filter
from .grid import gaussian_smooth, gradient, laplacian
from .gridio import read_grid, write_grid
from .kalman import KalmanConfig, apply_kalman
from .metrics import RegionSpec, cnre, pre
from .ncdf import NcdfConfig, run_ncdf
from .noise import NoiseConfig, corrupt, measure_snr
from .phantom import PhantomConfig, generate_phantom, inclusion_mask
from .poro import PoroConfig, compute_pressure, compute_velocity, estimate_poro_series

__all__ = [
    "ConfigError", "DimensionError", "DomainError", "FormatError", "NumericalError", "PoroflowError",
    "FilterMethod", "apply_filter", "median_filter",
    "gaussian_smooth", "gradient", "laplacian",
    "read_grid", "write_grid",
    "KalmanConfig", "apply_kalman",
    "RegionSpec", "cnre", "pre",
    "NcdfConfig", "run_ncdf",
    "NoiseConfig", "corrupt", "measure_snr",
    "PhantomConfig", "generate_phantom", "inclusion_mask",
    "PoroConfig", "compute_pressure", "compute_velocity", "estimate_poro_series",
]
