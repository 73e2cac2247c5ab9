import math

import pytest

from poroflow.config import build_dataclass, parse_float, parse_int_list, parse_kv_text, parse_str_list
from poroflow.errors import ConfigError
from poroflow.kalman import KalmanConfig
from poroflow.phantom import PhantomConfig


def test_kv_text_ignores_comments_and_blanks():
    text = "# header\n\nrows = 64  # trailing\ncols=32\n"
    assert parse_kv_text(text) == {"rows": "64", "cols": "32"}
    with pytest.raises(ConfigError, match=":2:"):
        parse_kv_text("a=1\nnot a pair\n")


def test_scalar_and_list_parsing():
    assert parse_float("inf") == math.inf
    assert parse_float(" 1e-3 ") == 1e-3
    with pytest.raises(ConfigError):
        parse_float("abc")
    assert parse_int_list("1..3, 7") == [1, 2, 3, 7]
    with pytest.raises(ConfigError):
        parse_int_list("1..x")
    assert parse_str_list("kalman, ncdf,") == ["kalman", "ncdf"]


def test_build_dataclass_converts_by_annotation():
    cfg = build_dataclass(PhantomConfig, {"rows": "64", "applied_strain": "0.02", "times": "1,2"})
    assert cfg.rows == 64 and cfg.applied_strain == 0.02 and cfg.times == (1.0, 2.0)
    k = build_dataclass(KalmanConfig, {"detrend": "yes"})
    assert k.detrend is True
    with pytest.raises(ConfigError, match="unknown key"):
        build_dataclass(KalmanConfig, {"gain": "1"})
    with pytest.raises(ConfigError):
        build_dataclass(KalmanConfig, {"window_wk": "many"})
