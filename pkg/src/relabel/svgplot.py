"""Minimal deterministic SVG line charts.

Charts are plain text written with fixed-precision coordinates, so the same
data always produces byte-identical files.  Deliberately tiny: multiple named
series on shared axes, ticks, and a legend; nothing else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from xml.sax.saxutils import escape

_COLORS = (
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
    "#9467bd", "#8c564b", "#17becf", "#7f7f7f",
)
_MARGIN_LEFT, _MARGIN_RIGHT, _MARGIN_TOP, _MARGIN_BOTTOM = 62.0, 18.0, 42.0, 48.0


@dataclass(frozen=True, slots=True)
class Series:
    """One named polyline; non-finite y values break the line."""

    name: str
    points: tuple[tuple[float, float], ...]


def _ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    if not math.isfinite(lo) or not math.isfinite(hi):
        return []
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / target
    magnitude = 10.0 ** math.floor(math.log10(raw))
    step = next(m * magnitude for m in (1.0, 2.0, 5.0, 10.0) if (hi - lo) / (m * magnitude) <= target)
    first = math.ceil(lo / step - 1e-9) * step
    ticks = []
    value = first
    while value <= hi + step * 1e-9:
        ticks.append(round(value, 10))
        value += step
    return ticks


def _label(value: float) -> str:
    return f"{value:g}"


def _bounds(series: tuple[Series, ...]) -> tuple[float, float, float, float]:
    xs = [x for s in series for x, y in s.points if math.isfinite(x) and math.isfinite(y)]
    ys = [y for s in series for x, y in s.points if math.isfinite(x) and math.isfinite(y)]
    if not xs:
        return 0.0, 1.0, 0.0, 1.0
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    if x_hi <= x_lo:
        x_hi = x_lo + 1.0
    if y_hi <= y_lo:
        y_hi = y_lo + 1.0
    pad = 0.05 * (y_hi - y_lo)
    return x_lo, x_hi, y_lo - pad, y_hi + pad


def line_chart_svg(
    title: str,
    x_label: str,
    y_label: str,
    series: tuple[Series, ...],
    width: float = 640.0,
    height: float = 400.0,
) -> str:
    x_lo, x_hi, y_lo, y_hi = _bounds(tuple(series))
    plot_w = width - _MARGIN_LEFT - _MARGIN_RIGHT
    plot_h = height - _MARGIN_TOP - _MARGIN_BOTTOM

    def sx(x: float) -> float:
        return _MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w

    def sy(y: float) -> float:
        return _MARGIN_TOP + (y_hi - y) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" height="{height:.0f}" '
        f'viewBox="0 0 {width:.0f} {height:.0f}" font-family="sans-serif" font-size="12">',
        f'<rect width="{width:.0f}" height="{height:.0f}" fill="white"/>',
        f'<text x="{width / 2:.2f}" y="20" text-anchor="middle" font-size="15">{escape(title)}</text>',
    ]
    for x in _ticks(x_lo, x_hi):
        px = sx(x)
        parts.append(
            f'<line x1="{px:.2f}" y1="{_MARGIN_TOP:.2f}" x2="{px:.2f}" '
            f'y2="{_MARGIN_TOP + plot_h:.2f}" stroke="#dddddd"/>'
        )
        parts.append(
            f'<text x="{px:.2f}" y="{_MARGIN_TOP + plot_h + 16:.2f}" '
            f'text-anchor="middle">{escape(_label(x))}</text>'
        )
    for y in _ticks(y_lo, y_hi):
        py = sy(y)
        parts.append(
            f'<line x1="{_MARGIN_LEFT:.2f}" y1="{py:.2f}" '
            f'x2="{_MARGIN_LEFT + plot_w:.2f}" y2="{py:.2f}" stroke="#dddddd"/>'
        )
        parts.append(
            f'<text x="{_MARGIN_LEFT - 6:.2f}" y="{py + 4:.2f}" '
            f'text-anchor="end">{escape(_label(y))}</text>'
        )
    parts.append(
        f'<rect x="{_MARGIN_LEFT:.2f}" y="{_MARGIN_TOP:.2f}" width="{plot_w:.2f}" '
        f'height="{plot_h:.2f}" fill="none" stroke="#333333"/>'
    )
    parts.append(
        f'<text x="{_MARGIN_LEFT + plot_w / 2:.2f}" y="{height - 10:.2f}" '
        f'text-anchor="middle">{escape(x_label)}</text>'
    )
    parts.append(
        f'<text x="16" y="{_MARGIN_TOP + plot_h / 2:.2f}" text-anchor="middle" '
        f'transform="rotate(-90 16 {_MARGIN_TOP + plot_h / 2:.2f})">{escape(y_label)}</text>'
    )
    for i, s in enumerate(series):
        color = _COLORS[i % len(_COLORS)]
        run: list[str] = []
        chunks: list[list[str]] = [run]
        for x, y in s.points:
            if math.isfinite(x) and math.isfinite(y):
                run.append(f"{sx(x):.2f},{sy(y):.2f}")
            elif run:
                run = []
                chunks.append(run)
        for chunk in chunks:
            if len(chunk) >= 2:
                parts.append(
                    f'<polyline points="{" ".join(chunk)}" fill="none" '
                    f'stroke="{color}" stroke-width="1.5"/>'
                )
            elif len(chunk) == 1:
                cx, cy = chunk[0].split(",")
                parts.append(f'<circle cx="{cx}" cy="{cy}" r="2.5" fill="{color}"/>')
        ly = _MARGIN_TOP + 8 + 16 * i
        lx = _MARGIN_LEFT + plot_w - 120
        parts.append(f'<rect x="{lx:.2f}" y="{ly - 9:.2f}" width="10" height="10" fill="{color}"/>')
        parts.append(f'<text x="{lx + 14:.2f}" y="{ly:.2f}">{escape(s.name)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_line_chart(
    path: str | Path,
    title: str,
    x_label: str,
    y_label: str,
    series: tuple[Series, ...],
    width: float = 640.0,
    height: float = 400.0,
) -> None:
    Path(path).write_text(
        line_chart_svg(title, x_label, y_label, tuple(series), width, height), encoding="utf-8"
    )
