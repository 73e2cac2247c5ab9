"""``poroflow`` command line: phantom, corrupt, filter, poro, metrics, bench, plot.

Exit status: 0 success, 1 runtime error, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from pathlib import Path

from .bench import BenchConfig, run_bench
from .config import build_dataclass, load_kv, parse_float, pick
from .errors import ConfigError, PoroflowError
from .filters import METHODS, FilterMethod, apply_filter, median_filter
from .gridio import format_float, read_grid, write_grid
from .kalman import KalmanConfig, apply_kalman
from .metrics import RegionSpec, cnre, pre_detail
from .ncdf import NcdfConfig, run_ncdf_with_info
from .noise import NoiseConfig, corrupt
from .phantom import PhantomConfig, background_mask, generate_phantom, inclusion_mask
from .plot import plot_curves
from .poro import PoroConfig, compute_pressure, compute_velocity, volumetric_strain


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        valid = sorted(
            opt for action in self._actions for opt in action.option_strings if opt.startswith("--")
        )
        hint = f"\nvalid flags: {' '.join(valid)}" if valid else ""
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}{hint}\n")


def _float_arg(text):
    try:
        return parse_float(text)
    except ConfigError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _center_arg(text):
    try:
        r, c = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected ROW,COL, got {text!r}") from None
    return r, c


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="poroflow", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    fmt = dict(choices=("binary", "text"), default="binary", help="output grid format (default: binary)")

    p = sub.add_parser("phantom", help="write analytic phantom fields for one time instant")
    p.add_argument("--config", help="key=value phantom config file")
    p.add_argument("--time", type=_float_arg, required=True, help="time instant in seconds")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--format", **fmt)

    p = sub.add_parser("corrupt", help="add AM + additive noise to a truth grid")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--snr-db", type=_float_arg, default=40.0, help="additive SNR in dB ('inf' disables)")
    p.add_argument("--am-sigma", type=float, default=0.1)
    p.add_argument("--am-corr-len", type=float, default=2.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--out-am")
    p.add_argument("--out-additive")
    p.add_argument("--format", **fmt)

    p = sub.add_parser("filter", help="filter a strain grid")
    p.add_argument("--method", choices=METHODS, required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--params", help="key=value file of Kalman / NCDF / median parameters")
    p.add_argument("--emit-meta", help="write NCDF iteration count and time steps here")
    p.add_argument("--format", **fmt)

    p = sub.add_parser("poro", help="fluid pressure and velocity from strain frames")
    p.add_argument("--frames", required=True, help="manifest of 't_seconds, axial_path, lateral_path' lines")
    p.add_argument("--k-pa", type=float, required=True, help="compression modulus K in Pa")
    p.add_argument("--center", type=_center_arg, required=True, help="radial origin as ROW,COL")
    p.add_argument("--steady-index", type=int, default=-1)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--format", **fmt)

    p = sub.add_parser("metrics", help="CNRe and PRE of an estimate against truth")
    p.add_argument("--est", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--inc-mask", required=True)
    p.add_argument("--bg-mask", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--filter", dest="filter_tag", default="")
    p.add_argument("--snr-db", type=_float_arg, default=math.nan)
    p.add_argument("--t", type=_float_arg, default=math.nan)
    p.add_argument("--quantity", default="")
    p.add_argument("--signed", action="store_true", help="signed PRE (errors may cancel)")

    p = sub.add_parser("bench", help="run the benchmark sweep")
    p.add_argument("--config", help="key=value bench config file")
    p.add_argument("--out-dir", help="overrides out_dir from the config")
    p.add_argument("--quiet", action="store_true")

    p = sub.add_parser("plot", help="SVG chart of a metric vs SNR from rows.csv")
    p.add_argument("rows")
    p.add_argument("--quantity", required=True, choices=("lateral_strain", "axial_strain", "pressure", "velocity"))
    p.add_argument("--metric", required=True, choices=("cnre", "pre", "pre_percent"))
    p.add_argument("--out", required=True)
    p.add_argument("--t", type=float)
    p.add_argument("--am-sigma", type=float)
    return parser


def _cmd_phantom(args):
    cfg = build_dataclass(PhantomConfig, load_kv(args.config)) if args.config else PhantomConfig()
    state = generate_phantom(cfg, args.time)
    d = Path(args.out_dir)
    d.mkdir(parents=True, exist_ok=True)
    for name in ("axial", "lateral", "volumetric", "pressure_truth", "velocity_truth"):
        write_grid(getattr(state, name), d / f"{name}.grid", args.format)
    write_grid(inclusion_mask(cfg), d / "mask.grid", args.format)
    write_grid(background_mask(cfg), d / "background_mask.grid", args.format)
    return 0


def _cmd_corrupt(args):
    truth = read_grid(args.input)
    real = corrupt(truth, NoiseConfig(args.snr_db, args.am_sigma, args.am_corr_len, args.seed))
    write_grid(real.noisy, args.out, args.format)
    if args.out_am:
        write_grid(real.am_field, args.out_am, args.format)
    if args.out_additive:
        write_grid(real.additive_field, args.out_additive, args.format)
    return 0


def _method_from_params(tag, params_path):
    values = load_kv(params_path) if params_path else {}
    kalman_keys, ncdf_keys = pick(values, KalmanConfig), pick(values, NcdfConfig)
    median_size = int(values.pop("median_size", 5))
    unknown = set(values) - set(kalman_keys) - set(ncdf_keys)
    if unknown:
        raise ConfigError(f"unknown parameter(s): {', '.join(sorted(unknown))}")
    return FilterMethod(
        tag=tag,
        kalman_cfg=build_dataclass(KalmanConfig, kalman_keys),
        ncdf_cfg=build_dataclass(NcdfConfig, ncdf_keys),
        median_size=median_size,
    )


def _cmd_filter(args):
    method = _method_from_params(args.method, args.params)
    grid = read_grid(args.input)
    run = None
    if method.tag == "median":
        out = median_filter(grid, method.median_size)
    elif method.tag == "kalman":
        out = apply_kalman(grid, method.kalman_cfg)
    else:
        src = apply_kalman(grid, method.kalman_cfg) if method.tag == "proposed" else grid
        run = run_ncdf_with_info(src, method.ncdf_cfg)
        out = run.image
    write_grid(out, args.out, args.format)
    if args.emit_meta:
        lines = [f"method={method.tag}"]
        if run is not None:
            lines += [
                f"iterations={run.iterations}",
                f"converged={str(run.converged).lower()}",
                "dt=" + ",".join(format_float(dt) for dt in run.dts),
            ]
        Path(args.emit_meta).write_text("\n".join(lines) + "\n")
    return 0


def _read_manifest(path):
    path = Path(path)
    frames = []
    for lineno, raw in enumerate(path.read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 3:
            raise ConfigError(f"{path}:{lineno}: expected 't_seconds, axial_path, lateral_path'")
        t = parse_float(parts[0], "t_seconds")
        axial, lateral = (Path(p) if Path(p).is_absolute() else path.parent / p for p in parts[1:])
        frames.append((t, volumetric_strain(read_grid(axial), read_grid(lateral))))
    return frames


def _cmd_poro(args):
    frames = _read_manifest(args.frames)
    if len(frames) < 2:
        raise ConfigError("manifest needs at least 2 frames (one is the steady state)")
    cfg = PoroConfig(args.k_pa, args.center[0], args.center[1], args.steady_index)
    try:
        _, eps_inf = frames[cfg.steady_state_index]
    except IndexError:
        raise ConfigError(f"--steady-index {args.steady_index} out of range for {len(frames)} frames") from None
    d = Path(args.out_dir)
    d.mkdir(parents=True, exist_ok=True)
    for t, eps in frames:
        p = compute_pressure(eps, eps_inf, cfg)
        write_grid(p, d / f"pressure_{t:g}.grid", args.format)
        write_grid(compute_velocity(p, cfg), d / f"velocity_{t:g}.grid", args.format)
    return 0


def _cmd_metrics(args):
    est, truth = read_grid(args.est), read_grid(args.truth)
    regions = RegionSpec(read_grid(args.inc_mask), read_grid(args.bg_mask))
    c = cnre(est, regions)
    pr = pre_detail(est, truth, regions.inclusion_mask, signed=args.signed)
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["filter", "snr_db", "t_seconds", "quantity", "cnre", "pre_percent", "excluded_pixels"])
        w.writerow([args.filter_tag, repr(args.snr_db), repr(args.t), args.quantity, repr(c), repr(pr.percent), pr.excluded])
    return 0


def _cmd_bench(args):
    values = load_kv(args.config) if args.config else {}
    cfg = BenchConfig.from_mapping(values)
    out_dir = args.out_dir or cfg.out_dir
    if not out_dir:
        raise UsageError("bench needs --out-dir or out_dir= in the config")

    def progress(method, snr, am, seed):
        if not args.quiet:
            print(f"{method} snr={snr:g} am={am:g} seed={seed}", file=sys.stderr)

    result = run_bench(cfg, out_dir, progress)
    print(f"wrote {result.paths['rows']} ({len(result.rows)} rows, {result.failures} failed cells, "
          f"{result.total_time_s:.1f} s)")
    return 1 if result.failures else 0


def _cmd_plot(args):
    out = plot_curves(args.rows, args.quantity, args.metric, args.out, t=args.t, am_sigma=args.am_sigma)
    print(f"wrote {out}")
    return 0


COMMANDS = {
    "phantom": _cmd_phantom,
    "corrupt": _cmd_corrupt,
    "filter": _cmd_filter,
    "poro": _cmd_poro,
    "metrics": _cmd_metrics,
    "bench": _cmd_bench,
    "plot": _cmd_plot,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"poroflow {args.command}: {exc}", file=sys.stderr)
        return 2
    except (PoroflowError, OSError, ValueError) as exc:
        print(f"poroflow {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
