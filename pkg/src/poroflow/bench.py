"""Benchmark sweep: phantom -> noise -> filters -> pressure/velocity -> metrics.

One benchmark *cell* is a (method, snr_db, am_sigma, seed) combination. A
cell filters the axial and lateral strain frames at every requested time
plus a drained steady-state frame, estimates pressure and velocity, and
emits one row per (time, quantity). A cell that raises is recorded as
failed and the sweep continues.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import math
import platform
import statistics
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .config import build_dataclass, parse_float_list, parse_int_list, parse_str_list, pick
from .errors import ConfigError
from .filters import METHODS, FilterMethod, apply_filter
from .kalman import KalmanConfig
from .metrics import RegionSpec, cnre, pre_detail
from .ncdf import NcdfConfig
from .noise import NoiseConfig, corrupt
from .phantom import PhantomConfig, background_mask, generate_phantom, inclusion_mask
from .poro import PoroConfig, compute_pressure, compute_velocity

QUANTITIES = ("lateral_strain", "axial_strain", "pressure", "velocity")
COMPONENTS = ("axial", "lateral")
ROW_FIELDS = (
    "method", "snr_db", "am_sigma", "seed", "t_seconds", "quantity",
    "cnre", "pre_percent", "excluded_pixels", "wall_time_s", "status", "reason",
)
SUMMARY_FIELDS = (
    "method", "snr_db", "am_sigma", "t_seconds", "quantity", "n",
    "cnre_mean", "cnre_std", "pre_mean", "pre_std", "wall_time_mean",
)
BASELINE_NOTE = (
    "median baseline is applied directly to the noisy strain grid "
    "(no displacement image / least-squares strain stage)"
)


@dataclass
class BenchConfig:
    phantom: PhantomConfig = field(default_factory=PhantomConfig)
    snr_db: list = field(default_factory=lambda: [30.0, 40.0, 50.0, 60.0])
    am_sigma: list = field(default_factory=lambda: [0.1])
    am_corr_len: float = 2.0
    seeds: list = field(default_factory=lambda: list(range(1, 21)))
    methods: list = field(default_factory=lambda: list(METHODS))
    kalman: KalmanConfig = field(default_factory=KalmanConfig)
    ncdf: NcdfConfig = field(default_factory=NcdfConfig)
    median_size: int = 5
    k_pa: float | None = None
    out_dir: str | None = None

    def __post_init__(self):
        if not self.seeds:
            raise ConfigError("bench needs at least one seed")
        if not self.snr_db:
            raise ConfigError("bench needs at least one SNR")
        if not self.am_sigma:
            raise ConfigError("bench needs at least one am_sigma")
        if not self.methods:
            raise ConfigError("bench needs at least one method")
        bad = [m for m in self.methods if m not in METHODS]
        if bad:
            raise ConfigError(f"unknown method(s) {bad}; valid methods: {', '.join(METHODS)}")
        if not self.phantom.times:
            raise ConfigError("bench needs at least one time")

    @property
    def times(self):
        return self.phantom.times

    @property
    def compression_modulus(self) -> float:
        return self.k_pa if self.k_pa is not None else self.phantom.compression_modulus

    @classmethod
    def from_mapping(cls, values: dict[str, str]) -> "BenchConfig":
        values = dict(values)
        kw = {}
        if "snr_db" in values:
            kw["snr_db"] = parse_float_list(values.pop("snr_db"), "snr_db")
        if "am_sigma" in values:
            kw["am_sigma"] = parse_float_list(values.pop("am_sigma"), "am_sigma")
        if "seeds" in values:
            kw["seeds"] = parse_int_list(values.pop("seeds"), "seeds")
        if "methods" in values:
            kw["methods"] = parse_str_list(values.pop("methods"))
        if "am_corr_len" in values:
            kw["am_corr_len"] = float(values.pop("am_corr_len"))
        if "median_size" in values:
            kw["median_size"] = int(values.pop("median_size"))
        if "k_pa" in values:
            kw["k_pa"] = float(values.pop("k_pa"))
        if "out_dir" in values:
            kw["out_dir"] = values.pop("out_dir")

        phantom_keys = pick(values, PhantomConfig)
        kalman_keys = pick(values, KalmanConfig)
        ncdf_keys = pick(values, NcdfConfig)
        unknown = set(values) - set(phantom_keys) - set(kalman_keys) - set(ncdf_keys)
        if unknown:
            raise ConfigError(f"unknown bench key(s): {', '.join(sorted(unknown))}")
        kw["phantom"] = build_dataclass(PhantomConfig, phantom_keys)
        kw["kalman"] = build_dataclass(KalmanConfig, kalman_keys)
        kw["ncdf"] = build_dataclass(NcdfConfig, ncdf_keys)
        return cls(**kw)

    def echo(self) -> str:
        lines = []
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if dataclasses.is_dataclass(v):
                for sub in dataclasses.fields(v):
                    lines.append(f"{f.name}.{sub.name}={getattr(v, sub.name)!r}")
            else:
                lines.append(f"{f.name}={v!r}")
        return "\n".join(lines)


@dataclass
class BenchResult:
    rows: list
    summary: list
    failures: int
    total_time_s: float
    paths: dict = field(default_factory=dict)


def frame_seed(seed: int, t: float, component: str) -> int:
    """Noise seed for one strain frame; independent of SNR and AM level."""
    ss = np.random.SeedSequence([int(seed), int(round(t * 1000)), COMPONENTS.index(component)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _truth_frames(cfg: BenchConfig):
    states = {t: generate_phantom(cfg.phantom, t) for t in cfg.times}
    steady = generate_phantom(cfg.phantom, cfg.phantom.steady_time)
    return states, steady


def _noisy_frames(cfg: BenchConfig, states, steady, snr, am, seed):
    noisy = {}
    for t, state in list(states.items()) + [(steady.t, steady)]:
        for comp in COMPONENTS:
            ncfg = NoiseConfig(snr_db=snr, am_sigma=am, am_corr_len=cfg.am_corr_len, seed=frame_seed(seed, t, comp))
            noisy[(t, comp)] = corrupt(getattr(state, comp), ncfg).noisy
    return noisy


def run_cell(cfg: BenchConfig, method: str, snr, am, seed, states, steady, regions, inc):
    """Rows for one (method, snr, am, seed) cell. Raises on numerical failure."""
    fm = FilterMethod(tag=method, kalman_cfg=cfg.kalman, ncdf_cfg=cfg.ncdf, median_size=cfg.median_size)
    noisy = _noisy_frames(cfg, states, steady, snr, am, seed)
    filtered, elapsed = {}, {}
    for key, img in noisy.items():
        t0 = time.perf_counter()
        filtered[key] = apply_filter(img, fm)
        elapsed[key] = time.perf_counter() - t0

    pcfg = PoroConfig(cfg.compression_modulus, cfg.phantom.center_row, cfg.phantom.center_col)
    ts = steady.t
    vol_inf = filtered[(ts, "axial")] + filtered[(ts, "lateral")]
    out = []
    for t, state in states.items():
        t0 = time.perf_counter()
        p = compute_pressure(filtered[(t, "axial")] + filtered[(t, "lateral")], vol_inf, pcfg)
        t_p = time.perf_counter() - t0
        t0 = time.perf_counter()
        v = compute_velocity(p, pcfg)
        t_v = time.perf_counter() - t0
        frames_time = elapsed[(t, "axial")] + elapsed[(t, "lateral")]
        items = {
            "lateral_strain": (filtered[(t, "lateral")], state.lateral, elapsed[(t, "lateral")]),
            "axial_strain": (filtered[(t, "axial")], state.axial, elapsed[(t, "axial")]),
            "pressure": (p, state.pressure_truth, frames_time + t_p),
            "velocity": (v, state.velocity_truth, frames_time + t_p + t_v),
        }
        for q in QUANTITIES:
            est, truth, wall = items[q]
            pr = pre_detail(est, truth, inc)
            out.append(_row(method, snr, am, seed, t, q, cnre(est, regions), pr.percent, pr.excluded, wall))
    return out


def _row(method, snr, am, seed, t, q, c, p, excluded, wall, status="ok", reason=""):
    return {
        "method": method, "snr_db": float(snr), "am_sigma": float(am), "seed": int(seed),
        "t_seconds": float(t), "quantity": q, "cnre": float(c), "pre_percent": float(p),
        "excluded_pixels": int(excluded), "wall_time_s": float(wall), "status": status, "reason": reason,
    }


def _sort_key(row):
    return (
        METHODS.index(row["method"]), row["snr_db"], row["am_sigma"], row["seed"],
        row["t_seconds"], QUANTITIES.index(row["quantity"]),
    )


def summarize(rows) -> list[dict]:
    groups: dict = {}
    for r in rows:
        if r["status"] != "ok":
            continue
        key = (r["method"], r["snr_db"], r["am_sigma"], r["t_seconds"], r["quantity"])
        groups.setdefault(key, []).append(r)
    out = []
    for key in sorted(groups, key=lambda k: (METHODS.index(k[0]), k[1], k[2], k[3], QUANTITIES.index(k[4]))):
        g = groups[key]
        c = [r["cnre"] for r in g]
        p = [r["pre_percent"] for r in g]
        out.append({
            "method": key[0], "snr_db": key[1], "am_sigma": key[2], "t_seconds": key[3], "quantity": key[4],
            "n": len(g),
            "cnre_mean": statistics.fmean(c), "cnre_std": statistics.stdev(c) if len(c) > 1 else 0.0,
            "pre_mean": statistics.fmean(p), "pre_std": statistics.stdev(p) if len(p) > 1 else 0.0,
            "wall_time_mean": statistics.fmean(r["wall_time_s"] for r in g),
        })
    return out


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_csv(path, rows, fields) -> None:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: _fmt(r[k]) for k in fields})
    Path(path).write_text(buf.getvalue())


def read_rows(path) -> list[dict]:
    """Parse ``rows.csv`` back into typed dicts."""
    out = []
    with open(path, newline="") as fh:
        for r in csv.DictReader(fh):
            out.append({
                "method": r["method"], "snr_db": float(r["snr_db"]), "am_sigma": float(r["am_sigma"]),
                "seed": int(r["seed"]), "t_seconds": float(r["t_seconds"]), "quantity": r["quantity"],
                "cnre": float(r["cnre"]), "pre_percent": float(r["pre_percent"]),
                "excluded_pixels": int(r["excluded_pixels"]), "wall_time_s": float(r["wall_time_s"]),
                "status": r["status"], "reason": r.get("reason", ""),
            })
    return out


def run_bench(cfg: BenchConfig, out_dir=None, progress=None) -> BenchResult:
    out_dir = out_dir if out_dir is not None else cfg.out_dir
    start = time.perf_counter()
    states, steady = _truth_frames(cfg)
    inc = inclusion_mask(cfg.phantom)
    regions = RegionSpec(inc, background_mask(cfg.phantom))

    rows, failures = [], 0
    for method in cfg.methods:
        for snr in cfg.snr_db:
            for am in cfg.am_sigma:
                for seed in cfg.seeds:
                    try:
                        rows.extend(run_cell(cfg, method, snr, am, seed, states, steady, regions, inc))
                    except Exception as exc:  # isolate the cell, keep sweeping
                        failures += 1
                        reason = f"{type(exc).__name__}: {exc}".replace("\n", " ")
                        for t in cfg.times:
                            for q in QUANTITIES:
                                rows.append(_row(method, snr, am, seed, t, q, math.nan, math.nan, 0, 0.0, "failed", reason))
                    if progress is not None:
                        progress(method, snr, am, seed)
    rows.sort(key=_sort_key)
    summary = summarize(rows)
    total = time.perf_counter() - start

    result = BenchResult(rows=rows, summary=summary, failures=failures, total_time_s=total)
    if out_dir is not None:
        d = Path(out_dir)
        d.mkdir(parents=True, exist_ok=True)
        paths = {"rows": d / "rows.csv", "summary": d / "summary.csv", "meta": d / "run_meta.txt"}
        write_csv(paths["rows"], rows, ROW_FIELDS)
        write_csv(paths["summary"], summary, SUMMARY_FIELDS)
        paths["meta"].write_text(
            "\n".join([
                f"poroflow {__version__}",
                f"python {platform.python_version()} numpy {np.__version__} scipy {scipy.__version__}",
                f"total_time_s={total:.3f}",
                f"cells={len(cfg.methods) * len(cfg.snr_db) * len(cfg.am_sigma) * len(cfg.seeds)} failed={failures}",
                f"compression_modulus_pa={cfg.compression_modulus!r}",
                f"steady_state_time_s={steady.t!r}",
                f"note: {BASELINE_NOTE}",
                "note: SNR is set on the strain grid (additive component), not on RF data",
                "note: PRE is evaluated inside the inclusion mask",
                "[config]",
                cfg.echo(),
                "",
            ])
        )
        result.paths = paths
    return result
