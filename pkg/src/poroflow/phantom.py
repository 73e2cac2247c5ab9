"""Analytic poroelastic creep phantom: a stiff inclusion in a softer background.

This stands in for a finite-element creep simulation. It is a separable
model, not a solution of the consolidation equations; it reproduces the
bell-shaped, exponentially decaying fluid pressure of a creep test and
gives closed-form truth for every quantity.

With pixel coordinates ``(i, j)``, ``R = hypot(i - center_row, j - center_col)``
and ``r0 = inclusion_radius``:

    bump(R)      = exp(-(R / r0)**2)
    c            = E_b / E_i - 1                     (negative for a stiff inclusion)
    nu(R)        = nu_b + (nu_i - nu_b) * bump(R)
    decay(t)     = exp(-t / tau)
    axial(R, t)  = -s * (1 + c * bump(R) * decay(t))   s = applied_strain
    lateral      = -nu(R) * axial
    volumetric   = axial + lateral = -s * (1 - nu(R)) * (1 + c * bump(R) * decay(t))

The steady state (t -> inf) is ``volumetric_inf = -s * (1 - nu(R))``, so the
fluid pressure ``p = -K (volumetric(t) - volumetric_inf)`` is

    p(R, t) = K * s * c * bump(R) * (1 - nu(R)) * decay(t)

and the permeability-normalized radial velocity ``v = -dp/dR`` is

    v(R, t) = -K * s * c * decay(t) * bump'(R) * (1 - nu_b + 2 (nu_b - nu_i) bump(R))
    bump'(R) = -2 R / r0**2 * bump(R)

Strains are compression-negative, so with these signs the pressure bell
is negative (``c < 0``). Velocity is in Pa per pixel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DomainError


@dataclass(frozen=True)
class PhantomConfig:
    rows: int = 128
    cols: int = 128
    center_row: float | None = None  # default rows // 2
    center_col: float | None = None
    inclusion_radius: float = 24.0
    E_b: float = 32.78e3
    E_i: float = 70.47e3
    nu_b: float = 0.4
    nu_i: float = 0.3
    k_b: float = 3.19e-10  # interstitial permeabilities, metadata only
    k_i: float = 3.19e-12
    chi_b: float = 1.89e-9  # vascular permeabilities, metadata only
    chi_i: float = 5.67e-9
    applied_strain: float = 0.01
    tau: float = 60.0
    times: tuple[float, ...] = (36.0, 108.0, 180.0)
    k_pa: float | None = None  # compression modulus; default is the inclusion bulk modulus

    def __post_init__(self):
        if self.center_row is None:
            object.__setattr__(self, "center_row", float(self.rows // 2))
        if self.center_col is None:
            object.__setattr__(self, "center_col", float(self.cols // 2))
        object.__setattr__(self, "times", tuple(float(t) for t in self.times))
        self.validate()

    def validate(self) -> None:
        if self.rows < 3 or self.cols < 3:
            raise ConfigError(f"phantom must be at least 3x3, got {self.rows}x{self.cols}")
        for name in ("nu_b", "nu_i"):
            v = getattr(self, name)
            if not 0 < v < 0.5:
                raise ConfigError(f"{name} must lie in (0, 0.5), got {v}")
        for name in ("E_b", "E_i", "tau", "inclusion_radius"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        if self.k_pa is not None and not self.k_pa > 0:
            raise ConfigError(f"k_pa must be positive, got {self.k_pa}")
        r = self.inclusion_radius
        if (
            self.center_row - r < 0
            or self.center_row + r > self.rows - 1
            or self.center_col - r < 0
            or self.center_col + r > self.cols - 1
        ):
            raise ConfigError("inclusion does not fit inside the grid")
        if any(t < 0 for t in self.times):
            raise ConfigError("phantom times must be non-negative")

    @property
    def compression_modulus(self) -> float:
        if self.k_pa is not None:
            return float(self.k_pa)
        return self.E_i / (3.0 * (1.0 - 2.0 * self.nu_i))

    @property
    def contrast(self) -> float:
        return self.E_b / self.E_i - 1.0

    @property
    def steady_time(self) -> float:
        """A time late enough to act as the drained reference frame."""
        return 100.0 * self.tau


@dataclass(frozen=True)
class PhantomState:
    t: float
    axial: np.ndarray
    lateral: np.ndarray
    volumetric: np.ndarray
    pressure_truth: np.ndarray
    velocity_truth: np.ndarray
    meta: dict = field(default_factory=dict)


def radius_map(cfg: PhantomConfig) -> np.ndarray:
    i, j = np.mgrid[0 : cfg.rows, 0 : cfg.cols].astype(np.float64)
    return np.hypot(i - cfg.center_row, j - cfg.center_col)


def bump(R, radius):
    return np.exp(-((np.asarray(R, dtype=np.float64) / radius) ** 2))


def generate_phantom(cfg: PhantomConfig, t: float) -> PhantomState:
    if not t >= 0:
        raise DomainError(f"phantom time must be >= 0, got {t}")
    R = radius_map(cfg)
    b = bump(R, cfg.inclusion_radius)
    nu = cfg.nu_b + (cfg.nu_i - cfg.nu_b) * b
    decay = math.exp(-t / cfg.tau)
    s = cfg.applied_strain
    K = cfg.compression_modulus
    c = cfg.contrast

    axial = -s * (1.0 + c * b * decay)
    lateral = -nu * axial
    volumetric = axial + lateral
    axial_inf = np.full_like(axial, -s)
    volumetric_inf = axial_inf - nu * axial_inf
    pressure = -K * (volumetric - volumetric_inf)

    db_dR = -2.0 * R / cfg.inclusion_radius**2 * b
    velocity = -K * s * c * decay * db_dR * (1.0 - cfg.nu_b + 2.0 * (cfg.nu_b - cfg.nu_i) * b)

    return PhantomState(
        t=float(t),
        axial=axial,
        lateral=lateral,
        volumetric=volumetric,
        pressure_truth=pressure,
        velocity_truth=velocity,
        meta={"k_pa": K, "contrast": c},
    )


def inclusion_mask(cfg: PhantomConfig) -> np.ndarray:
    """1.0 inside ``inclusion_radius`` of the center, 0.0 elsewhere."""
    return (radius_map(cfg) <= cfg.inclusion_radius).astype(np.float64)


def background_mask(cfg: PhantomConfig, inner: float = 1.5, outer: float = 2.5) -> np.ndarray:
    """Annulus ``inner*r0 <= R <= outer*r0``, clipped to the grid.

    The gap between the inclusion edge and ``inner*r0`` keeps the blended
    boundary out of the background statistics.
    """
    R = radius_map(cfg)
    r0 = cfg.inclusion_radius
    return ((R >= inner * r0) & (R <= outer * r0)).astype(np.float64)
