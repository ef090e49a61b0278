"""Tiny static SVG line charts (no plotting dependency)."""

from __future__ import annotations

from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b")
W, H, PAD = 640, 400, 56


def _ticks(lo: float, hi: float, n: int = 5):
    if hi == lo:
        return [lo]
    return list(np.linspace(lo, hi, n))


def line_chart(path, series: dict, title: str = "", xlabel: str = "", ylabel: str = "", max_points: int = 800) -> None:
    """Write one chart with a polyline per named series (x = 1..len)."""
    ys = [np.asarray(v, dtype=float) for v in series.values() if len(v)]
    if not ys:
        return
    xmax = max(len(y) for y in ys)
    finite = np.concatenate([y[np.isfinite(y)] for y in ys])
    ylo, yhi = (float(finite.min()), float(finite.max())) if finite.size else (0.0, 1.0)
    if yhi == ylo:
        yhi = ylo + 1.0

    def sx(x):
        return PAD + (x - 1) / max(xmax - 1, 1) * (W - 2 * PAD)

    def sy(y):
        return H - PAD - (y - ylo) / (yhi - ylo) * (H - 2 * PAD)

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="11">',
             f'<rect width="{W}" height="{H}" fill="white"/>',
             f'<text x="{W / 2}" y="20" text-anchor="middle" font-size="14">{escape(title)}</text>',
             f'<line x1="{PAD}" y1="{H - PAD}" x2="{W - PAD}" y2="{H - PAD}" stroke="black"/>',
             f'<line x1="{PAD}" y1="{PAD}" x2="{PAD}" y2="{H - PAD}" stroke="black"/>',
             f'<text x="{W / 2}" y="{H - 14}" text-anchor="middle">{escape(xlabel)}</text>',
             f'<text x="14" y="{H / 2}" text-anchor="middle" transform="rotate(-90 14 {H / 2})">{escape(ylabel)}</text>']
    for v in _ticks(ylo, yhi):
        parts.append(f'<text x="{PAD - 4}" y="{sy(v) + 4:.1f}" text-anchor="end">{v:.3g}</text>')
    for v in _ticks(1, xmax):
        parts.append(f'<text x="{sx(v):.1f}" y="{H - PAD + 14}" text-anchor="middle">{v:.0f}</text>')
    for i, (name, y) in enumerate(zip(series, ys)):
        step = max(1, len(y) // max_points)
        xs = np.arange(1, len(y) + 1)[::step]
        pts = " ".join(f"{sx(x):.1f},{sy(v):.1f}" for x, v in zip(xs, y[::step]) if np.isfinite(v))
        color = COLORS[i % len(COLORS)]
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        parts.append(f'<text x="{W - PAD - 4}" y="{PAD + 14 * i}" text-anchor="end" fill="{color}">{escape(str(name))}</text>')
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n", encoding="utf-8")
