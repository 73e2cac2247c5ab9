import struct

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from poroflow.errors import ConfigError, FormatError
from poroflow.gridio import read_grid, write_grid

any_finite = st.floats(allow_nan=False, allow_infinity=False)


def test_binary_layout(tmp_path):
    g = np.array([[1.0, 2.0], [3.0, 4.0]])
    p = tmp_path / "a.grid"
    write_grid(g, p, "binary")
    raw = p.read_bytes()
    assert raw[:4] == b"PGRD"
    assert raw[4] == 1
    assert struct.unpack("<II", raw[5:13]) == (2, 2)
    assert struct.unpack("<4d", raw[13:]) == (1.0, 2.0, 3.0, 4.0)
    assert np.array_equal(read_grid(p), g)


def test_text_parse(tmp_path):
    p = tmp_path / "t.grid"
    p.write_text("# rows=1 cols=3\n0.1,0.2,0.3\n")
    g = read_grid(p)
    assert g.shape == (1, 3)
    assert g.tolist() == [[0.1, 0.2, 0.3]]


def test_text_header_written(tmp_path):
    p = tmp_path / "t.grid"
    write_grid(np.arange(6.0).reshape(2, 3), p, "text")
    assert p.read_text().splitlines()[0] == "# rows=2 cols=3 dtype=f64"


@settings(max_examples=100, deadline=None)
@given(st.tuples(st.integers(1, 6), st.integers(1, 6)).flatmap(lambda s: arrays(np.float64, s, elements=any_finite)))
def test_round_trip_bit_exact(tmp_path_factory, g):
    d = tmp_path_factory.mktemp("rt")
    for fmt in ("binary", "text"):
        p = d / f"g.{fmt}"
        write_grid(g, p, fmt)
        back = read_grid(p)
        assert back.shape == g.shape
        assert back.tobytes() == g.astype(np.float64).tobytes()


def test_truncated_binary(tmp_path):
    p = tmp_path / "a.grid"
    write_grid(np.ones((3, 3)), p)
    p.write_bytes(p.read_bytes()[:-5])
    with pytest.raises(FormatError) as exc:
        read_grid(p)
    assert exc.value.offset is not None


def test_truncated_header(tmp_path):
    p = tmp_path / "a.grid"
    p.write_bytes(b"PGRD\x01\x02")
    with pytest.raises(FormatError):
        read_grid(p)


def test_binary_nan_reports_offset(tmp_path):
    p = tmp_path / "a.grid"
    raw = b"PGRD" + bytes([1]) + struct.pack("<II", 1, 2) + struct.pack("<2d", 1.0, float("nan"))
    p.write_bytes(raw)
    with pytest.raises(FormatError) as exc:
        read_grid(p)
    assert exc.value.offset == 13 + 8


@pytest.mark.parametrize(
    "text",
    [
        "# rows=2 cols=2\n1,2\n",  # missing row
        "# rows=1 cols=2\n1,2,3\n",  # too many columns
        "# rows=1 cols=2\n1,abc\n",
        "# rows=1 cols=2\n1,inf\n",
        "# columns=2\n1,2\n",
        "# rows=1 cols=1 dtype=f32\n1\n",
    ],
)
def test_text_format_errors(tmp_path, text):
    p = tmp_path / "bad.grid"
    p.write_text(text)
    with pytest.raises(FormatError):
        read_grid(p)


def test_text_error_offset_points_at_value(tmp_path):
    p = tmp_path / "bad.grid"
    text = "# rows=1 cols=2\n1,abc\n"
    p.write_text(text)
    with pytest.raises(FormatError) as exc:
        read_grid(p)
    assert text[exc.value.offset :].startswith("abc")


def test_unknown_magic(tmp_path):
    p = tmp_path / "x.grid"
    p.write_bytes(b"XXXX")
    with pytest.raises(FormatError):
        read_grid(p)


def test_unknown_write_format(tmp_path):
    with pytest.raises(ConfigError):
        write_grid(np.ones((2, 2)), tmp_path / "x", "png")
