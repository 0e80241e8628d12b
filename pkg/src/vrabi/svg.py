"""Self-contained SVG line charts for eyeballing simulation output.

No external assets, stylesheets or fonts: everything is inline so the
files open anywhere.  Numbers are formatted with fixed precision, so a
given dataset always renders to identical bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["Curve", "line_chart"]


@dataclass
class Curve:
    label: str
    x: np.ndarray
    y: np.ndarray
    color: str = "#d62728"
    dash: str | None = None  # e.g. "6,3"
    width: float = 1.0


def _nice_ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    """Round tick positions covering [lo, hi]."""
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / target
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    first = math.ceil(lo / step) * step
    ticks = []
    v = first
    while v <= hi + 1e-12 * step:
        ticks.append(0.0 if abs(v) < 1e-12 * step else v)
        v += step
    return ticks


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def line_chart(
    curves: list[Curve],
    title: str = "",
    x_label: str = "",
    y_label: str = "",
    width: int = 880,
    height: int = 500,
) -> str:
    """Render curves into one SVG document string."""
    if not curves:
        raise ValueError("need at least one curve")
    ml, mr, mt, mb = 70, 20, 40, 55
    pw, ph = width - ml - mr, height - mt - mb

    x_lo = min(float(np.min(c.x)) for c in curves)
    x_hi = max(float(np.max(c.x)) for c in curves)
    y_lo = min(float(np.min(c.y)) for c in curves)
    y_hi = max(float(np.max(c.y)) for c in curves)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    pad = 0.04 * (y_hi - y_lo)
    y_lo -= pad
    y_hi += pad

    def px(x: float) -> float:
        return ml + (x - x_lo) / (x_hi - x_lo) * pw

    def py(y: float) -> float:
        return mt + (y_hi - y) / (y_hi - y_lo) * ph

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    font = 'font-family="sans-serif"'

    for tx in _nice_ticks(x_lo, x_hi):
        x = px(tx)
        parts.append(
            f'<line x1="{x:.2f}" y1="{mt}" x2="{x:.2f}" y2="{mt + ph}" '
            f'stroke="#dddddd" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{x:.2f}" y="{mt + ph + 18}" {font} font-size="12" '
            f'text-anchor="middle">{_fmt(tx)}</text>'
        )
    for ty in _nice_ticks(y_lo, y_hi):
        y = py(ty)
        parts.append(
            f'<line x1="{ml}" y1="{y:.2f}" x2="{ml + pw}" y2="{y:.2f}" '
            f'stroke="#dddddd" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{ml - 6}" y="{y + 4:.2f}" {font} font-size="12" '
            f'text-anchor="end">{_fmt(ty)}</text>'
        )
    parts.append(
        f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" '
        f'stroke="#333333" stroke-width="1"/>'
    )

    for c in curves:
        pts = " ".join(
            f"{px(float(xv)):.2f},{py(float(yv)):.2f}" for xv, yv in zip(c.x, c.y)
        )
        dash = f' stroke-dasharray="{c.dash}"' if c.dash else ""
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{c.color}" '
            f'stroke-width="{c.width}"{dash}/>'
        )

    if title:
        parts.append(
            f'<text x="{width / 2:.0f}" y="24" {font} font-size="16" '
            f'text-anchor="middle">{title}</text>'
        )
    if x_label:
        parts.append(
            f'<text x="{ml + pw / 2:.0f}" y="{height - 12}" {font} font-size="13" '
            f'text-anchor="middle">{x_label}</text>'
        )
    if y_label:
        parts.append(
            f'<text x="18" y="{mt + ph / 2:.0f}" {font} font-size="13" '
            f'text-anchor="middle" transform="rotate(-90 18 {mt + ph / 2:.0f})">'
            f"{y_label}</text>"
        )

    ly = mt + 14
    for c in curves:
        dash = f' stroke-dasharray="{c.dash}"' if c.dash else ""
        parts.append(
            f'<line x1="{ml + pw - 150}" y1="{ly}" x2="{ml + pw - 120}" y2="{ly}" '
            f'stroke="{c.color}" stroke-width="2"{dash}/>'
        )
        parts.append(
            f'<text x="{ml + pw - 114}" y="{ly + 4}" {font} font-size="12">'
            f"{c.label}</text>"
        )
        ly += 18

    parts.append("</svg>")
    return "\n".join(parts) + "\n"
