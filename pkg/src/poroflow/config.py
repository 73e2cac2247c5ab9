"""``key=value`` config files and conversion into the library's config objects."""

from __future__ import annotations

import dataclasses
import math
from pathlib import Path

from .errors import ConfigError


def parse_kv_text(text: str, source: str = "<config>") -> dict[str, str]:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected key=value, got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ConfigError(f"{source}:{lineno}: empty key")
        out[key] = value
    return out


def load_kv(path) -> dict[str, str]:
    path = Path(path)
    return parse_kv_text(path.read_text(), str(path))


def parse_float(value: str, key: str = "value") -> float:
    v = value.strip().lower()
    if v in ("inf", "+inf", "infinity"):
        return math.inf
    try:
        return float(v)
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {value!r} as a number") from None


def parse_float_list(value: str, key: str = "value") -> list[float]:
    return [parse_float(v, key) for v in value.split(",") if v.strip()]


def parse_int_list(value: str, key: str = "value") -> list[int]:
    """Comma-separated integers; ``a..b`` expands to the inclusive range."""
    out = []
    for part in (p.strip() for p in value.split(",")):
        if not part:
            continue
        try:
            if ".." in part:
                lo, hi = part.split("..", 1)
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
        except ValueError:
            raise ConfigError(f"{key}: cannot parse {part!r} as an integer or range") from None
    return out


def parse_str_list(value: str) -> list[str]:
    return [v.strip() for v in value.split(",") if v.strip()]


def _convert(field: dataclasses.Field, raw: str):
    kind = field.type if isinstance(field.type, str) else getattr(field.type, "__name__", str(field.type))
    name = field.name
    if kind.startswith("bool"):
        low = raw.strip().lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"{name}: expected a boolean, got {raw!r}")
    if kind.startswith("int"):
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"{name}: expected an integer, got {raw!r}") from None
    if kind.startswith("tuple"):
        return tuple(parse_float_list(raw, name))
    if "float" in kind:
        if raw.strip().lower() in ("none", "") and "None" in kind:
            return None
        return parse_float(raw, name)
    return raw


def build_dataclass(cls, values: dict[str, str], *, strict: bool = True):
    """Instantiate ``cls`` from string values, converting by annotated type.

    Unknown keys raise :class:`ConfigError` when ``strict``.
    """
    fields = {f.name: f for f in dataclasses.fields(cls)}
    unknown = sorted(set(values) - set(fields))
    if strict and unknown:
        raise ConfigError(f"unknown key(s) for {cls.__name__}: {', '.join(unknown)}; valid: {', '.join(fields)}")
    kwargs = {k: _convert(fields[k], v) for k, v in values.items() if k in fields}
    return cls(**kwargs)


def pick(values: dict[str, str], cls) -> dict[str, str]:
    names = {f.name for f in dataclasses.fields(cls)}
    return {k: v for k, v in values.items() if k in names}
