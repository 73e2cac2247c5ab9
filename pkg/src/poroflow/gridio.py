"""Grid file formats.

Binary (``.grid`` default)::

    b"PGRD" | version u8 (=1) | rows u32 LE | cols u32 LE | rows*cols f64 LE

Text::

    # rows=R cols=C dtype=f64
    v00,v01,...
    ...

Text values are written with 17 significant digits, which round-trips
IEEE doubles exactly. :func:`read_grid` detects the format from the first
bytes.
"""

from __future__ import annotations

import re
import struct
from pathlib import Path

import numpy as np

from .errors import ConfigError, FormatError
from .grid import as_grid

MAGIC = b"PGRD"
VERSION = 1
_HEADER = struct.Struct("<4sBII")
_TEXT_HEADER = re.compile(r"#\s*rows=(\d+)\s+cols=(\d+)(?:\s+dtype=(\w+))?\s*$")


def write_grid(grid, path, format: str = "binary") -> None:
    arr = as_grid(grid)
    path = Path(path)
    rows, cols = arr.shape
    if format == "binary":
        payload = _HEADER.pack(MAGIC, VERSION, rows, cols) + arr.astype("<f8").tobytes(order="C")
        path.write_bytes(payload)
    elif format == "text":
        lines = [f"# rows={rows} cols={cols} dtype=f64"]
        for row in arr:
            lines.append(",".join(format_float(v) for v in row))
        path.write_text("\n".join(lines) + "\n", encoding="ascii")
    else:
        raise ConfigError(f"unknown grid format {format!r}; expected 'text' or 'binary'")


def format_float(v: float) -> str:
    return f"{float(v):.17g}"


def read_grid(path) -> np.ndarray:
    data = Path(path).read_bytes()
    if data[:4] == MAGIC:
        return _parse_binary(data)
    if data[:1] == b"#":
        return _parse_text(data)
    raise FormatError("unrecognized grid file: expected 'PGRD' magic or '# rows=' header", 0)


def _parse_binary(data: bytes) -> np.ndarray:
    if len(data) < _HEADER.size:
        raise FormatError("truncated binary header", len(data))
    _, version, rows, cols = _HEADER.unpack_from(data)
    if version != VERSION:
        raise FormatError(f"unsupported binary grid version {version}", 4)
    if rows == 0 or cols == 0:
        raise FormatError(f"invalid dimensions {rows}x{cols}", 5)
    expected = _HEADER.size + 8 * rows * cols
    if len(data) != expected:
        kind = "truncated" if len(data) < expected else "oversized"
        raise FormatError(
            f"{kind} payload: header says {rows}x{cols} ({expected} bytes), file has {len(data)}",
            min(len(data), expected),
        )
    arr = np.frombuffer(data, dtype="<f8", offset=_HEADER.size).astype(np.float64).reshape(rows, cols)
    bad = np.flatnonzero(~np.isfinite(arr))
    if bad.size:
        raise FormatError("non-finite value in payload", _HEADER.size + 8 * int(bad[0]))
    return arr


def _parse_text(data: bytes) -> np.ndarray:
    try:
        text = data.decode("ascii")
    except UnicodeDecodeError as exc:
        raise FormatError("text grid is not ASCII", exc.start) from None
    lines = text.splitlines(keepends=True)
    header = lines[0].strip()
    m = _TEXT_HEADER.match(header)
    if not m:
        raise FormatError(f"malformed header {header!r}", 0)
    if m.group(3) not in (None, "f64"):
        raise FormatError(f"unsupported dtype {m.group(3)!r}", 0)
    rows, cols = int(m.group(1)), int(m.group(2))
    if rows == 0 or cols == 0:
        raise FormatError(f"invalid dimensions {rows}x{cols}", 0)

    out = np.empty((rows, cols), dtype=np.float64)
    offset = len(lines[0].encode("ascii"))
    r = 0
    for line in lines[1:]:
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            offset += len(line)
            continue
        if r >= rows:
            raise FormatError(f"more than {rows} data rows", offset)
        fields = stripped.split(",")
        if len(fields) != cols:
            raise FormatError(f"row {r} has {len(fields)} values, expected {cols}", offset)
        pos = offset + (len(line) - len(line.lstrip()))
        for c, field in enumerate(fields):
            try:
                v = float(field)
            except ValueError:
                raise FormatError(f"cannot parse {field.strip()!r} as a number", pos) from None
            if not np.isfinite(v):
                raise FormatError(f"non-finite value {field.strip()!r}", pos)
            out[r, c] = v
            pos += len(field) + 1
        r += 1
        offset += len(line)
    if r != rows:
        raise FormatError(f"expected {rows} data rows, found {r}", offset)
    return out
