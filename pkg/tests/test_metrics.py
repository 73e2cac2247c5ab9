import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poroflow.errors import DimensionError, DomainError
from poroflow.metrics import RegionSpec, cnre, pre, pre_detail


def _regions(shape=(10, 10)):
    inc = np.zeros(shape, bool)
    bg = np.zeros(shape, bool)
    inc[:5] = True
    bg[5:] = True
    return RegionSpec(inc, bg)


def test_cnre_hand_value():
    img = np.zeros((10, 10))
    img[:5] = np.tile([1.0, 3.0], 25).reshape(5, 10)
    img[5:] = np.tile([0.0, 2.0], 25).reshape(5, 10)
    # means 2 and 1, variances 1 and 1
    assert cnre(img, _regions()) == pytest.approx(1.0)


def test_cnre_uniform_regions_warn_and_return_inf():
    img = np.zeros((10, 10))
    img[:5] = 1.0
    with pytest.warns(RuntimeWarning):
        assert cnre(img, _regions()) == math.inf


@settings(max_examples=200, deadline=None)
@given(st.floats(-1e3, 1e3).filter(lambda a: abs(a) > 1e-3), st.floats(-1e3, 1e3), st.integers(0, 2**31))
def test_cnre_affine_invariance(a, b, seed):
    img = np.random.default_rng(seed).normal(size=(10, 10))
    assert cnre(a * img + b, _regions()) == pytest.approx(cnre(img, _regions()), rel=1e-9)


def test_region_checks():
    inc = np.zeros((10, 10), bool)
    inc[:5] = True
    with pytest.raises(DomainError, match="overlap"):
        RegionSpec(inc, inc)
    small = np.zeros((10, 10), bool)
    small[9, :3] = True
    with pytest.raises(DomainError):
        RegionSpec(inc, small)
    with pytest.raises(DimensionError):
        RegionSpec(inc, np.zeros((5, 5), bool))


def test_pre_values():
    truth = np.full((4, 4), 2.0)
    assert pre(truth, truth) == 0.0
    assert pre(truth * 1.1, truth) == pytest.approx(10.0)
    est = truth.copy()
    est[:2] = 1.8
    est[2:] = 2.2
    assert pre(est, truth) == pytest.approx(10.0)
    assert pre(est, truth, signed=True) == pytest.approx(0.0, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.01, 10.0), st.integers(0, 2**31))
def test_pre_scale_law(c, seed):
    truth = np.random.default_rng(seed).uniform(0.5, 2.0, size=(6, 6))
    assert pre(c * truth, truth) == pytest.approx(100.0 * abs(c - 1.0), rel=1e-9, abs=1e-9)


def test_pre_skips_zero_truth_and_masks():
    truth = np.ones((4, 4))
    truth[0, 0] = 0.0
    est = np.full((4, 4), 1.5)
    res = pre_detail(est, truth)
    assert res.excluded == 1 and res.percent == pytest.approx(50.0)
    mask = np.zeros((4, 4), bool)
    mask[3] = True
    est[3] = 1.0
    assert pre(est, truth, mask) == 0.0
    with pytest.raises(DomainError):
        pre(est, np.zeros((4, 4)))
    with pytest.raises(DimensionError):
        pre(est, truth, np.ones((2, 2)))
