"""Metric-vs-SNR line charts written as standalone SVG text."""

from __future__ import annotations

import math
import statistics
from pathlib import Path
from xml.sax.saxutils import escape

from .bench import read_rows
from .errors import DomainError
from .filters import METHODS

COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b")
METRICS = {"cnre": "cnre", "pre": "pre_percent", "pre_percent": "pre_percent"}
METRIC_LABELS = {"cnre": "CNRe", "pre_percent": "PRE (%)"}

WIDTH, HEIGHT = 720, 480
LEFT, RIGHT, TOP, BOTTOM = 80, 150, 60, 70


def collect_series(rows, quantity, metric, t=None, am_sigma=None):
    """``{method: [(snr, mean, std), ...]}`` for the selected slice of rows.

    ``t`` / ``am_sigma`` default to the smallest value present for ``quantity``.
    """
    column = METRICS.get(metric)
    if column is None:
        raise DomainError(f"unknown metric {metric!r}; expected one of {', '.join(sorted(METRICS))}")
    sel = [r for r in rows if r["status"] == "ok" and r["quantity"] == quantity]
    if sel and t is None:
        t = min(r["t_seconds"] for r in sel)
    if sel and am_sigma is None:
        am_sigma = min(r["am_sigma"] for r in sel)
    sel = [r for r in sel if r["t_seconds"] == t and r["am_sigma"] == am_sigma]
    sel = [r for r in sel if math.isfinite(r["snr_db"]) and math.isfinite(r[column])]
    if not sel:
        raise DomainError(
            f"no plottable rows for quantity={quantity!r}, metric={metric!r}, t_seconds={t}, "
            f"am_sigma={am_sigma} (status=ok, finite snr_db and metric)"
        )
    grouped: dict = {}
    for r in sel:
        grouped.setdefault(r["method"], {}).setdefault(r["snr_db"], []).append(r[column])
    order = sorted(grouped, key=lambda m: (METHODS.index(m) if m in METHODS else len(METHODS), m))
    series = {}
    for m in order:
        pts = []
        for snr in sorted(grouped[m]):
            vals = grouped[m][snr]
            pts.append((snr, statistics.fmean(vals), statistics.stdev(vals) if len(vals) > 1 else 0.0))
        series[m] = pts
    return series, t, am_sigma


def _nice_ticks(lo, hi, n=5):
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = next(s * mag for s in (1, 2, 2.5, 5, 10) if s * mag >= raw)
    start = math.floor(lo / step) * step
    ticks = []
    v = start
    while v <= hi + 1e-9 * step:
        ticks.append(round(v, 12))
        v += step
    return ticks


def render_svg(series, title, x_label, y_label) -> str:
    xs = sorted({x for pts in series.values() for x, _, _ in pts})
    lows = [m - s for pts in series.values() for _, m, s in pts]
    highs = [m + s for pts in series.values() for _, m, s in pts]
    y_ticks = _nice_ticks(min(0.0, min(lows)), max(highs))
    y_lo, y_hi = y_ticks[0], y_ticks[-1]
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    x_lo, x_hi = xs[0], xs[-1]
    pw, ph = WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM

    def px(x):
        return LEFT + (pw / 2 if x_hi == x_lo else (x - x_lo) / (x_hi - x_lo) * pw)

    def py(y):
        return TOP + ph - (y - y_lo) / (y_hi - y_lo) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
        f'<text x="{WIDTH / 2:.1f}" y="30" text-anchor="middle" font-family="sans-serif" '
        f'font-size="16">{escape(title)}</text>',
        f'<line x1="{LEFT}" y1="{TOP + ph}" x2="{LEFT + pw}" y2="{TOP + ph}" stroke="#000000"/>',
        f'<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{TOP + ph}" stroke="#000000"/>',
    ]
    for x in xs:
        out.append(
            f'<text x="{px(x):.2f}" y="{TOP + ph + 18}" text-anchor="middle" font-family="sans-serif" '
            f'font-size="11">{x:g}</text>'
        )
    for y in y_ticks:
        out.append(f'<line x1="{LEFT - 4}" y1="{py(y):.2f}" x2="{LEFT}" y2="{py(y):.2f}" stroke="#000000"/>')
        out.append(
            f'<text x="{LEFT - 8}" y="{py(y) + 4:.2f}" text-anchor="end" font-family="sans-serif" '
            f'font-size="11">{y:g}</text>'
        )
    out.append(
        f'<text x="{LEFT + pw / 2:.1f}" y="{HEIGHT - 25}" text-anchor="middle" font-family="sans-serif" '
        f'font-size="13">{escape(x_label)}</text>'
    )
    out.append(
        f'<text x="20" y="{TOP + ph / 2:.1f}" text-anchor="middle" font-family="sans-serif" font-size="13" '
        f'transform="rotate(-90 20 {TOP + ph / 2:.1f})">{escape(y_label)}</text>'
    )

    for idx, (method, pts) in enumerate(series.items()):
        color = COLORS[idx % len(COLORS)]
        coords = " ".join(f"{px(x):.2f},{py(m):.2f}" for x, m, _ in pts)
        out.append(f'<polyline class="series" data-method="{escape(method)}" fill="none" stroke="{color}" '
                   f'stroke-width="2" points="{coords}"/>')
        for x, m, s in pts:
            out.append(
                f'<g class="marker" data-method="{escape(method)}" data-x="{x:g}">'
                f'<line x1="{px(x):.2f}" y1="{py(m - s):.2f}" x2="{px(x):.2f}" y2="{py(m + s):.2f}" '
                f'stroke="{color}"/>'
                f'<circle cx="{px(x):.2f}" cy="{py(m):.2f}" r="3.5" fill="{color}"/></g>'
            )
        ly = TOP + 10 + 22 * idx
        lx = LEFT + pw + 20
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 24}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(
            f'<text x="{lx + 30}" y="{ly + 4}" font-family="sans-serif" font-size="12">{escape(method)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def plot_curves(rows_csv, quantity, metric, out_path, t=None, am_sigma=None) -> Path:
    rows = read_rows(rows_csv)
    series, t, am_sigma = collect_series(rows, quantity, metric, t, am_sigma)
    column = METRICS[metric]
    title = f"{METRIC_LABELS[column]} of {quantity.replace('_', ' ')} vs input SNR (t = {t:g} s, am_sigma = {am_sigma:g})"
    svg = render_svg(series, title, "input SNR (dB)", f"{METRIC_LABELS[column]} ({quantity})")
    out_path = Path(out_path)
    out_path.write_text(svg)
    return out_path
