"""Tiny dependency-free SVG line charts.

Output is a plain string with a fixed element order and fixed number
formatting, so the same data always serializes to the same bytes.
"""

from __future__ import annotations

import math

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
_WIDTH, _HEIGHT = 720, 440
_MARGIN = {"left": 72, "right": 16, "top": 28, "bottom": 46}


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _tick_label(x: float) -> str:
    if x == 0:
        return "0"
    mag = abs(x)
    if mag >= 1e4 or mag < 1e-2:
        return f"{x:.2e}"
    return f"{x:g}"


def _ticks(lo: float, hi: float, n: int = 5):
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        step = mult * mag
        if step >= raw:
            break
    first = math.ceil(lo / step) * step
    out = []
    t = first
    while t <= hi + 1e-9 * step:
        out.append(0.0 if abs(t) < 1e-12 * step else t)
        t += step
    return out


def line_chart(series, title: str, x_label: str, y_label: str,
               log_y: bool = False) -> str:
    """Render ``series`` = [(name, xs, ys), ...] to an SVG document string.

    ``None`` y-values break the line (gaps for infeasible points).
    """
    xs_all = [x for _, xs, _ in series for x in xs]
    ys_all = [y for _, _, ys in series for y in ys if y is not None]
    if not xs_all or not ys_all:
        raise ValueError("nothing to plot: no finite points in any series")
    if log_y:
        ys_all = [y for y in ys_all if y > 0]
        if not ys_all:
            raise ValueError("log scale needs positive y values")

    x_lo, x_hi = min(xs_all), max(xs_all)
    y_lo, y_hi = min(ys_all), max(ys_all)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + (abs(y_lo) if y_lo else 1.0)
    if log_y:
        y_lo_t, y_hi_t = math.log10(y_lo), math.log10(y_hi)
    else:
        pad = 0.05 * (y_hi - y_lo)
        y_lo_t, y_hi_t = y_lo - pad, y_hi + pad

    px0, px1 = _MARGIN["left"], _WIDTH - _MARGIN["right"]
    py0, py1 = _HEIGHT - _MARGIN["bottom"], _MARGIN["top"]

    def sx(x):
        return px0 + (x - x_lo) / (x_hi - x_lo) * (px1 - px0)

    def sy(y):
        t = math.log10(y) if log_y else y
        return py0 + (t - y_lo_t) / (y_hi_t - y_lo_t) * (py1 - py0)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" '
        f'height="{_HEIGHT}" viewBox="0 0 {_WIDTH} {_HEIGHT}" '
        f'font-family="sans-serif" font-size="12">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<text x="{_WIDTH / 2:.0f}" y="18" text-anchor="middle" '
        f'font-size="14">{title}</text>',
    ]

    for t in _ticks(x_lo, x_hi):
        x = sx(t)
        parts.append(f'<line x1="{_fmt(x)}" y1="{py0}" x2="{_fmt(x)}" '
                     f'y2="{py1}" stroke="#dddddd"/>')
        parts.append(f'<text x="{_fmt(x)}" y="{py0 + 16}" '
                     f'text-anchor="middle">{_tick_label(t)}</text>')
    if log_y:
        lo_d, hi_d = math.floor(y_lo_t), math.ceil(y_hi_t)
        y_ticks = [10.0 ** d for d in range(int(lo_d), int(hi_d) + 1)
                   if y_lo_t <= d <= y_hi_t]
    else:
        y_ticks = _ticks(y_lo_t, y_hi_t)
    for t in y_ticks:
        y = sy(t)
        parts.append(f'<line x1="{px0}" y1="{_fmt(y)}" x2="{px1}" '
                     f'y2="{_fmt(y)}" stroke="#dddddd"/>')
        parts.append(f'<text x="{px0 - 6}" y="{_fmt(y + 4)}" '
                     f'text-anchor="end">{_tick_label(t)}</text>')

    parts.append(f'<line x1="{px0}" y1="{py0}" x2="{px1}" y2="{py0}" '
                 f'stroke="#333333"/>')
    parts.append(f'<line x1="{px0}" y1="{py0}" x2="{px0}" y2="{py1}" '
                 f'stroke="#333333"/>')
    parts.append(f'<text x="{(px0 + px1) / 2:.0f}" y="{_HEIGHT - 10}" '
                 f'text-anchor="middle">{x_label}</text>')
    parts.append(f'<text x="16" y="{(py0 + py1) / 2:.0f}" text-anchor="middle" '
                 f'transform="rotate(-90 16 {(py0 + py1) / 2:.0f})">{y_label}</text>')

    for idx, (name, xs, ys) in enumerate(series):
        color = _PALETTE[idx % len(_PALETTE)]
        segments, current = [], []
        for x, y in zip(xs, ys):
            if y is None or (log_y and y <= 0):
                if current:
                    segments.append(current)
                current = []
                continue
            current.append((sx(x), sy(y)))
        if current:
            segments.append(current)
        for seg in segments:
            pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in seg)
            parts.append(f'<polyline points="{pts}" fill="none" '
                         f'stroke="{color}" stroke-width="1.8"/>')
        ly = _MARGIN["top"] + 14 * idx + 4
        parts.append(f'<line x1="{px1 - 130}" y1="{ly}" x2="{px1 - 106}" '
                     f'y2="{ly}" stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{px1 - 100}" y="{ly + 4}">{name}</text>')

    parts.append("</svg>")
    return "\n".join(parts) + "\n"
