"""Minimal deterministic SVG line plots (no plotting dependency).

Output bytes depend only on the input series, so golden-file comparisons and
byte-identical reruns are possible.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import numpy as np

_WIDTH, _HEIGHT = 640.0, 480.0
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 56.0, 16.0, 16.0, 40.0
_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    return [lo + (hi - lo) * i / (count - 1) for i in range(count)]


def _fmt(v: float) -> str:
    s = format(v, ".3f")
    return "0.000" if s == "-0.000" else s


def render_svg(series: Sequence[tuple[np.ndarray, np.ndarray]], title: str = "") -> str:
    """Render polylines with framed axes; one fixed palette color per series."""
    finite = []
    for xs, ys in series:
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        if xs.shape != ys.shape or xs.ndim != 1:
            raise ValueError("each series needs matching 1-d x and y arrays")
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
            raise ValueError("series data must be finite")
        finite.append((xs, ys))

    if finite:
        x_lo = min(float(xs.min()) for xs, _ in finite)
        x_hi = max(float(xs.max()) for xs, _ in finite)
        y_lo = min(float(ys.min()) for _, ys in finite)
        y_hi = max(float(ys.max()) for _, ys in finite)
    else:
        x_lo, x_hi, y_lo, y_hi = 0.0, 1.0, 0.0, 1.0
    if x_hi - x_lo < 1e-300:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    if y_hi - y_lo < 1e-300:
        y_lo, y_hi = y_lo - 0.5, y_hi + 0.5

    plot_w = _WIDTH - _MARGIN_L - _MARGIN_R
    plot_h = _HEIGHT - _MARGIN_T - _MARGIN_B

    def px(x: float) -> float:
        return _MARGIN_L + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y: float) -> float:
        return _MARGIN_T + (y_hi - y) / (y_hi - y_lo) * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH:g}" height="{_HEIGHT:g}" '
        f'viewBox="0 0 {_WIDTH:g} {_HEIGHT:g}">',
        f'<rect x="0" y="0" width="{_WIDTH:g}" height="{_HEIGHT:g}" fill="#ffffff"/>',
        f'<rect x="{_MARGIN_L:g}" y="{_MARGIN_T:g}" width="{plot_w:g}" height="{plot_h:g}" '
        f'fill="none" stroke="#000000" stroke-width="1"/>',
    ]
    if title:
        out.append(
            f'<text x="{_WIDTH / 2:g}" y="{_MARGIN_T - 4:g}" text-anchor="middle" '
            f'font-family="monospace" font-size="12">{title}</text>'
        )
    for tx in _ticks(x_lo, x_hi):
        x = px(tx)
        out.append(
            f'<line x1="{_fmt(x)}" y1="{_fmt(_MARGIN_T + plot_h)}" '
            f'x2="{_fmt(x)}" y2="{_fmt(_MARGIN_T + plot_h + 5)}" stroke="#000000" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{_fmt(x)}" y="{_fmt(_MARGIN_T + plot_h + 18)}" text-anchor="middle" '
            f'font-family="monospace" font-size="10">{format(tx, ".6g")}</text>'
        )
    for ty in _ticks(y_lo, y_hi):
        y = py(ty)
        out.append(
            f'<line x1="{_fmt(_MARGIN_L - 5)}" y1="{_fmt(y)}" '
            f'x2="{_fmt(_MARGIN_L)}" y2="{_fmt(y)}" stroke="#000000" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{_fmt(_MARGIN_L - 8)}" y="{_fmt(y + 3)}" text-anchor="end" '
            f'font-family="monospace" font-size="10">{format(ty, ".6g")}</text>'
        )
    for i, (xs, ys) in enumerate(finite):
        pts = " ".join(f"{_fmt(px(float(x)))},{_fmt(py(float(y)))}" for x, y in zip(xs, ys))
        color = _PALETTE[i % len(_PALETTE)]
        out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_svg(series: Sequence[tuple[np.ndarray, np.ndarray]], path: Path | str, title: str = "") -> None:
    """Write the rendered plot; byte output is a pure function of the input."""
    Path(path).write_text(render_svg(series, title=title))
