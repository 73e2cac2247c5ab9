"""Elastographic quality factors: CNRe and percent relative error."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError
from .grid import as_grid

MIN_REGION_PIXELS = 16


@dataclass(frozen=True)
class RegionSpec:
    inclusion_mask: np.ndarray
    background_mask: np.ndarray

    def __post_init__(self):
        inc = np.asarray(self.inclusion_mask) != 0
        bg = np.asarray(self.background_mask) != 0
        if inc.shape != bg.shape:
            raise DimensionError(f"mask shapes differ: {inc.shape} vs {bg.shape}")
        if np.any(inc & bg):
            raise DomainError("inclusion and background masks overlap")
        for name, m in (("inclusion", inc), ("background", bg)):
            if m.sum() < MIN_REGION_PIXELS:
                raise DomainError(f"{name} mask selects {int(m.sum())} pixels; need >= {MIN_REGION_PIXELS}")


@dataclass(frozen=True)
class MetricsReport:
    filter_tag: str
    snr_db: float
    t: float
    quantity: str
    cnre: float
    pre_percent: float
    excluded_pixels: int = 0


@dataclass(frozen=True)
class PreResult:
    percent: float
    excluded: int


def cnre(image, regions: RegionSpec) -> float:
    """``2 (m_i - m_b)**2 / (var_i + var_b)`` between inclusion and background."""
    arr = as_grid(image, name="image")
    inc = np.asarray(regions.inclusion_mask) != 0
    bg = np.asarray(regions.background_mask) != 0
    if inc.shape != arr.shape:
        raise DimensionError(f"mask shape {inc.shape} does not match image {arr.shape}")
    a, b = arr[inc], arr[bg]
    m_i, m_b = a.mean(), b.mean()
    pooled = a.var() + b.var()
    if pooled == 0:
        warnings.warn("CNRe: both regions are perfectly uniform; returning +inf", RuntimeWarning, stacklevel=2)
        return math.inf
    return float(2.0 * (m_i - m_b) ** 2 / pooled)


def pre_detail(estimate, truth, mask=None, signed: bool = False) -> PreResult:
    est = as_grid(estimate, name="estimate")
    tru = as_grid(truth, name="truth")
    if est.shape != tru.shape:
        raise DimensionError(f"shape mismatch: estimate {est.shape} vs truth {tru.shape}")
    sel = np.ones(tru.shape, dtype=bool) if mask is None else (np.asarray(mask) != 0)
    if sel.shape != tru.shape:
        raise DimensionError(f"mask shape {sel.shape} does not match {tru.shape}")
    eps = 1e-12 * np.abs(tru).max()
    usable = sel & (np.abs(tru) > eps)
    excluded = int(sel.sum() - usable.sum())
    if not usable.any():
        raise DomainError("every evaluated pixel has (near-)zero truth; PRE undefined")
    rel = (est[usable] - tru[usable]) / tru[usable]
    if not signed:
        rel = np.abs(rel)
    return PreResult(percent=float(100.0 * rel.mean()), excluded=excluded)


def pre(estimate, truth, mask=None, signed: bool = False) -> float:
    """Mean relative error over the masked pixels, in percent.

    Absolute relative error by default; ``signed=True`` gives the literal
    signed mean, in which errors of opposite sign cancel. Pixels whose
    truth is below ``1e-12 * max|truth|`` are skipped.
    """
    return pre_detail(estimate, truth, mask, signed).percent
