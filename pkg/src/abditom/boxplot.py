"""Hand-rolled SVG box plots for sweep results.

Output is a pure function of the input values: fixed canvas, fixed
precision, no timestamps, so identical sweeps render identical bytes.
"""

from __future__ import annotations

import math
import statistics
from typing import Dict, List, Optional, Sequence

from .errors import EmptyData, UnknownMetric

METRICS = ("score", "efficiency")

_W, _H = 640, 420
_LEFT, _RIGHT, _TOP, _BOTTOM = 64, 24, 48, 48
_BOX_FRACTION = 0.5  # box width as a share of each group's horizontal band


def metric_values(rows: Sequence[dict], metric: str) -> Dict[int, List[float]]:
    """Per team size, the metric's values in row order.

    Games without a defined value (efficiency with zero hints) are
    skipped rather than imputed.
    """
    if metric not in METRICS:
        raise UnknownMetric(f"{metric!r}; expected one of {METRICS}")
    groups: Dict[int, List[float]] = {}
    for row in rows:
        raw = row[metric]
        if raw == "" or raw is None:
            continue
        groups.setdefault(int(row["players"]), []).append(float(raw))
    if not groups or all(not vs for vs in groups.values()):
        raise EmptyData(f"no values for metric {metric!r}")
    return groups


def _five_numbers(values: List[float]):
    if len(values) == 1:
        v = values[0]
        return v, v, v, [], []
    q1, med, q3 = statistics.quantiles(values, n=4, method="inclusive")
    iqr = q3 - q1
    lo_fence, hi_fence = q1 - 1.5 * iqr, q3 + 1.5 * iqr
    inside = [v for v in values if lo_fence <= v <= hi_fence]
    outliers = sorted(v for v in values if v < lo_fence or v > hi_fence)
    whisk_lo = min(inside) if inside else q1
    whisk_hi = max(inside) if inside else q3
    return q1, med, q3, [whisk_lo, whisk_hi], outliers


def _nice_step(span: float) -> float:
    raw = span / 6 if span > 0 else 1.0
    mag = 10 ** math.floor(math.log10(raw))
    for mult in (1, 2, 5, 10):
        if raw <= mult * mag:
            return mult * mag
    return 10 * mag


def _fmt(v: float) -> str:
    return f"{v:.2f}".rstrip("0").rstrip(".")


def box_plot_svg(
    groups: Dict[int, List[float]],
    title: str,
    y_label: str,
    ref_line: Optional[float] = None,
) -> str:
    """One box per group key, keys sorted, classic 1.5 IQR whiskers."""
    keys = sorted(k for k, vs in groups.items() if vs)
    if not keys:
        raise EmptyData("no groups to plot")
    stats = {k: _five_numbers(sorted(groups[k])) for k in keys}

    all_vals = [v for k in keys for v in groups[k]]
    lo = min(all_vals + ([ref_line] if ref_line is not None else []))
    hi = max(all_vals + ([ref_line] if ref_line is not None else []))
    if lo == hi:
        lo, hi = lo - 1, hi + 1
    pad = (hi - lo) * 0.06
    lo, hi = lo - pad, hi + pad

    plot_w = _W - _LEFT - _RIGHT
    plot_h = _H - _TOP - _BOTTOM

    def ty(v: float) -> float:
        return _TOP + plot_h * (hi - v) / (hi - lo)

    band = plot_w / len(keys)
    box_w = band * _BOX_FRACTION

    parts: List[str] = []
    parts.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="12">')
    parts.append(f'<rect width="{_W}" height="{_H}" fill="white"/>')
    parts.append(
        f'<text x="{_W / 2:.1f}" y="24" text-anchor="middle" '
        f'font-size="15">{title}</text>')

    # y axis with ticks on a nice step
    step = _nice_step(hi - lo)
    tick = math.ceil(lo / step) * step
    while tick <= hi:
        y = ty(tick)
        parts.append(
            f'<line x1="{_LEFT}" y1="{y:.2f}" x2="{_W - _RIGHT}" y2="{y:.2f}" '
            f'stroke="#dddddd" stroke-width="1"/>')
        parts.append(
            f'<text x="{_LEFT - 8}" y="{y + 4:.2f}" text-anchor="end">'
            f'{_fmt(tick)}</text>')
        tick += step
    parts.append(
        f'<text x="16" y="{_TOP + plot_h / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 16 {_TOP + plot_h / 2:.1f})">{y_label}</text>')

    if ref_line is not None:
        y = ty(ref_line)
        parts.append(
            f'<line x1="{_LEFT}" y1="{y:.2f}" x2="{_W - _RIGHT}" y2="{y:.2f}" '
            f'stroke="#b03030" stroke-width="1" stroke-dasharray="6 4"/>')
        parts.append(
            f'<text x="{_W - _RIGHT - 2}" y="{y - 4:.2f}" text-anchor="end" '
            f'fill="#b03030">{_fmt(ref_line)}</text>')

    for i, k in enumerate(keys):
        cx = _LEFT + band * (i + 0.5)
        q1, med, q3, whisk, outliers = stats[k]
        x0, x1 = cx - box_w / 2, cx + box_w / 2
        if whisk:
            wlo, whi = whisk
            parts.append(
                f'<line x1="{cx:.2f}" y1="{ty(wlo):.2f}" x2="{cx:.2f}" '
                f'y2="{ty(q1):.2f}" stroke="#333333" stroke-width="1"/>')
            parts.append(
                f'<line x1="{cx:.2f}" y1="{ty(q3):.2f}" x2="{cx:.2f}" '
                f'y2="{ty(whi):.2f}" stroke="#333333" stroke-width="1"/>')
            for wv in (wlo, whi):
                parts.append(
                    f'<line x1="{cx - box_w / 4:.2f}" y1="{ty(wv):.2f}" '
                    f'x2="{cx + box_w / 4:.2f}" y2="{ty(wv):.2f}" '
                    f'stroke="#333333" stroke-width="1"/>')
        parts.append(
            f'<rect x="{x0:.2f}" y="{ty(q3):.2f}" width="{box_w:.2f}" '
            f'height="{ty(q1) - ty(q3):.2f}" fill="#9db8d2" '
            f'stroke="#333333" stroke-width="1"/>')
        parts.append(
            f'<line x1="{x0:.2f}" y1="{ty(med):.2f}" x2="{x1:.2f}" '
            f'y2="{ty(med):.2f}" stroke="#111111" stroke-width="2"/>')
        for ov in outliers:
            parts.append(
                f'<circle cx="{cx:.2f}" cy="{ty(ov):.2f}" r="2.5" '
                f'fill="none" stroke="#333333" stroke-width="1"/>')
        parts.append(
            f'<text x="{cx:.2f}" y="{_H - _BOTTOM + 20}" '
            f'text-anchor="middle">{k} players</text>')

    parts.append(
        f'<line x1="{_LEFT}" y1="{_TOP + plot_h}" x2="{_W - _RIGHT}" '
        f'y2="{_TOP + plot_h}" stroke="#333333" stroke-width="1"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
