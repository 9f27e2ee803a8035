"""Minimal hand-emitted SVG line plots (no plotting dependency).

Just enough for a static multi-curve figure: framed axes, linear ticks,
polylines, and a legend.  Curve points with None or out-of-frame values
break the polyline into segments instead of distorting the scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


@dataclass
class Curve:
    label: str
    points: Sequence[tuple[float, float | None]]
    color: str
    # curves excluded from autoscaling (e.g. a diverging series) still draw
    # inside the frame set by the others
    scales: bool = True


def _ticks(lo: float, hi: float, n: int = 6) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    step = (hi - lo) / (n - 1)
    return [lo + i * step for i in range(n)]


def _fmt(v: float) -> str:
    return f"{v:.4g}"


def line_plot(
    curves: Sequence[Curve],
    title: str,
    xlabel: str,
    ylabel: str,
    width: int = 900,
    height: int = 560,
) -> str:
    ml, mr, mt, mb = 70, 30, 40, 50
    pw = width - ml - mr
    ph = height - mt - mb

    xs = [x for c in curves for x, y in c.points if y is not None]
    ys = [y for c in curves if c.scales for x, y in c.points if y is not None]
    if not xs or not ys:
        xs = ys = [0.0, 1.0]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    pad = 0.05 * (y_hi - y_lo)
    y_lo -= pad
    y_hi += pad

    def px(x: float) -> float:
        return ml + (x - x_lo) / (x_hi - x_lo) * pw

    def py(y: float) -> float:
        return mt + ph - (y - y_lo) / (y_hi - y_lo) * ph

    out: list[str] = []
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" viewBox="0 0 {width} {height}">'
    )
    out.append(f'<rect width="{width}" height="{height}" fill="white"/>')
    out.append(
        f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" '
        f'stroke="black" stroke-width="1"/>'
    )
    out.append(
        f'<text x="{width / 2:.1f}" y="{mt - 14}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="16">{title}</text>'
    )
    for tx in _ticks(x_lo, x_hi):
        X = px(tx)
        out.append(
            f'<line x1="{X:.2f}" y1="{mt + ph}" x2="{X:.2f}" '
            f'y2="{mt + ph + 5}" stroke="black"/>'
        )
        out.append(
            f'<text x="{X:.2f}" y="{mt + ph + 20}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12">{_fmt(tx)}</text>'
        )
    for ty in _ticks(y_lo, y_hi):
        Y = py(ty)
        out.append(
            f'<line x1="{ml - 5}" y1="{Y:.2f}" x2="{ml}" y2="{Y:.2f}" '
            f'stroke="black"/>'
        )
        out.append(
            f'<text x="{ml - 8}" y="{Y + 4:.2f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="12">{_fmt(ty)}</text>'
        )
    out.append(
        f'<text x="{ml + pw / 2:.1f}" y="{height - 12}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">{xlabel}</text>'
    )
    out.append(
        f'<text x="18" y="{mt + ph / 2:.1f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14" '
        f'transform="rotate(-90 18 {mt + ph / 2:.1f})">{ylabel}</text>'
    )

    for curve in curves:
        segment: list[str] = []
        segments: list[list[str]] = []
        for x, y in curve.points:
            inside = y is not None and y_lo <= y <= y_hi and x_lo <= x <= x_hi
            if inside:
                segment.append(f"{px(x):.2f},{py(y):.2f}")
            elif segment:
                segments.append(segment)
                segment = []
        if segment:
            segments.append(segment)
        for seg in segments:
            if len(seg) < 2:
                continue
            out.append(
                f'<polyline fill="none" stroke="{curve.color}" '
                f'stroke-width="1.5" points="{" ".join(seg)}"/>'
            )

    ly = mt + 16
    for curve in curves:
        lx = ml + pw - 200
        out.append(
            f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 28}" y2="{ly - 4}" '
            f'stroke="{curve.color}" stroke-width="2"/>'
        )
        out.append(
            f'<text x="{lx + 34}" y="{ly}" font-family="sans-serif" '
            f'font-size="12">{curve.label}</text>'
        )
        ly += 18

    out.append("</svg>")
    return "\n".join(out) + "\n"
