"""Minimal static SVG scatter plots.

Plots are emitted by string assembly rather than a plotting library so the
output is a pure function of the input data: no timestamps, random element
ids, or library-version drift, which keeps rerun outputs byte-identical.
Each panel is an 800 x 800 viewport; 1-D embeddings render as a strip plot
along the horizontal axis.
"""

from __future__ import annotations

import numpy as np

__all__ = ["scatter_svg", "write_scatter_svg"]

PANEL_SIZE = 800
_MARGIN = 50
_POINT_RADIUS = 2.5
_COLORS = ("#1f6fb4", "#d1711c")


def _panel_elements(points: np.ndarray, x_offset: int, title: str, color: str) -> list[str]:
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.shape[1] == 1:
        pts = np.column_stack([pts[:, 0], np.zeros(pts.shape[0])])
    xs, ys = pts[:, 0], pts[:, 1]
    span = PANEL_SIZE - 2 * _MARGIN
    cx = 0.5 * (xs.min() + xs.max())
    cy = 0.5 * (ys.min() + ys.max())
    half = 0.5 * max(xs.max() - xs.min(), ys.max() - ys.min())
    if half == 0.0:
        half = 1.0
    scale = span / (2.0 * half)  # same scale both axes: preserve shape
    out = [
        f'<rect x="{x_offset}" y="0" width="{PANEL_SIZE}" height="{PANEL_SIZE}" '
        f'fill="white" stroke="#cccccc"/>',
        f'<text x="{x_offset + PANEL_SIZE // 2}" y="30" text-anchor="middle" '
        f'font-family="sans-serif" font-size="20">{title}</text>',
    ]
    for x, y in zip(xs, ys):
        px = x_offset + PANEL_SIZE / 2 + (x - cx) * scale
        py = PANEL_SIZE / 2 - (y - cy) * scale  # SVG y grows downward
        out.append(
            f'<circle cx="{px:.6g}" cy="{py:.6g}" r="{_POINT_RADIUS}" '
            f'fill="{color}" fill-opacity="0.6"/>'
        )
    return out


def scatter_svg(panels: list[tuple[str, np.ndarray]]) -> str:
    """Render one or more (title, points) panels side by side as SVG text."""
    width = PANEL_SIZE * len(panels)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{PANEL_SIZE}" '
        f'viewBox="0 0 {width} {PANEL_SIZE}">',
    ]
    for idx, (title, points) in enumerate(panels):
        color = _COLORS[idx % len(_COLORS)]
        lines.extend(_panel_elements(points, idx * PANEL_SIZE, title, color))
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def write_scatter_svg(path, panels: list[tuple[str, np.ndarray]]) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(scatter_svg(panels))
