import math

import numpy as np
import pytest

from poroflow.errors import ConfigError, DomainError
from poroflow.phantom import PhantomConfig, background_mask, generate_phantom, inclusion_mask, radius_map

from . import oracles

CFG = PhantomConfig()


def test_defaults_match_table_1():
    assert (CFG.E_b, CFG.E_i, CFG.nu_b, CFG.nu_i) == (32.78e3, 70.47e3, 0.4, 0.3)
    assert (CFG.k_b, CFG.k_i) == (3.19e-10, 3.19e-12)
    assert CFG.times == (36.0, 108.0, 180.0)
    assert (CFG.rows, CFG.cols) == (128, 128)


def test_default_modulus_is_inclusion_bulk_modulus():
    assert CFG.compression_modulus == pytest.approx(70.47e3 / (3 * 0.4))
    assert PhantomConfig(k_pa=54400).compression_modulus == 54400


@pytest.mark.parametrize(
    "kw",
    [dict(nu_b=0.5), dict(nu_i=0.0), dict(E_i=-1.0), dict(inclusion_radius=70.0), dict(center_row=3.0), dict(tau=0.0)],
)
def test_invalid_config(kw):
    with pytest.raises(ConfigError):
        PhantomConfig(**kw)


def test_negative_time_rejected():
    with pytest.raises(DomainError):
        generate_phantom(CFG, -1.0)


def test_volumetric_is_axial_plus_lateral():
    s = generate_phantom(CFG, 36.0)
    assert np.array_equal(s.volumetric, s.axial + s.lateral)


def test_steady_state_pressure_vanishes():
    s = generate_phantom(CFG, 100 * CFG.tau)
    assert np.abs(s.pressure_truth).max() < 1e-6 * CFG.compression_modulus * CFG.applied_strain
    assert generate_phantom(CFG, math.inf).pressure_truth.max() == 0.0


@pytest.mark.parametrize("t", [0.0, 36.0, 180.0])
def test_velocity_zero_at_center(t):
    s = generate_phantom(CFG, t)
    assert s.velocity_truth[int(CFG.center_row), int(CFG.center_col)] == 0.0


def test_pressure_decays_by_e_after_one_tau():
    p0 = generate_phantom(CFG, 0.0).pressure_truth
    p1 = generate_phantom(CFG, CFG.tau).pressure_truth
    k = np.unravel_index(np.abs(p0).argmax(), p0.shape)
    assert p1[k] == pytest.approx(math.exp(-1) * p0[k], rel=1e-12)


def test_peak_pressure_non_increasing():
    peaks = [np.abs(generate_phantom(CFG, t).pressure_truth).max() for t in (0, 10, 36, 108, 180, 400)]
    assert all(a >= b for a, b in zip(peaks, peaks[1:]))


def test_transient_is_exponential():
    inf = generate_phantom(CFG, math.inf).volumetric
    d1 = generate_phantom(CFG, 36.0).volumetric - inf
    d2 = generate_phantom(CFG, 108.0).volumetric - inf
    mask = np.abs(d1) > 1e-6 * np.abs(d1).max()
    ratio = d2[mask] / d1[mask]
    assert np.allclose(ratio, math.exp(-(108.0 - 36.0) / CFG.tau), rtol=1e-9, atol=0)


def test_pressure_and_velocity_match_independent_closed_form():
    s = generate_phantom(CFG, 36.0)
    R = radius_map(CFG)
    for i, j in [(64, 64), (64, 80), (50, 70), (10, 100), (64, 88)]:
        p, v = oracles.phantom_closed_form(R[i, j], 36.0)
        assert s.pressure_truth[i, j] == pytest.approx(p, rel=1e-6, abs=1e-12)
        assert s.velocity_truth[i, j] == pytest.approx(v, rel=1e-6, abs=1e-12)


def test_velocity_is_minus_radial_derivative_numerically():
    # central difference of the closed-form pressure along a row through the center
    t = 36.0
    R = np.linspace(1.0, 40.0, 40)
    h = 1e-4
    for r in R:
        p_plus, _ = oracles.phantom_closed_form(r + h, t)
        p_minus, _ = oracles.phantom_closed_form(r - h, t)
        _, v = oracles.phantom_closed_form(r, t)
        assert -(p_plus - p_minus) / (2 * h) == pytest.approx(v, rel=1e-6, abs=1e-9)


def test_inclusion_mask_pixels():
    m = inclusion_mask(CFG)
    assert m[int(CFG.center_row), int(CFG.center_col)] == 1.0
    assert m[0, 0] == 0.0 and m[-1, -1] == 0.0
    r = CFG.inclusion_radius
    assert abs(m.sum() - math.pi * r * r) <= 2 * math.pi * r
    assert set(np.unique(m)) <= {0.0, 1.0}


def test_background_ring_is_disjoint_and_populated():
    inc, bg = inclusion_mask(CFG), background_mask(CFG)
    assert not np.any((inc > 0) & (bg > 0))
    assert bg.sum() >= 16
    R = radius_map(CFG)
    assert R[bg > 0].min() >= 1.5 * CFG.inclusion_radius
