# -*- coding: utf-8 -*-
"""
****************************************************
*                     Utility                      *
*            (c) 2023 PQN MOO contributors         *
****************************************************
"""
from typing import Dict, List, Tuple
from xml.sax.saxutils import escape
import numpy as np


PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]
WIDTH, HEIGHT, MARGIN = 640, 480, 60


def _ticks(lower: float, upper: float, count: int = 5) -> List[float]:
    return list(np.linspace(lower, upper, count))


def scatter_svg(series: Dict[str, Tuple[np.ndarray, np.ndarray]], title: str, x_label: str = "F1",
                y_label: str = "F2") -> str:
    """
    Function for rendering a two-dimensional scatter plot as a standalone SVG document.
    :param series: Mapping of series name to (points of shape (k, 2), emphasis mask of shape (k,)).
        Emphasized points are drawn filled, the others hollow.
    :param title: Plot title.
    :param x_label: Horizontal axis label.
    :param y_label: Vertical axis label.
    :return: SVG document.
    """
    finite = [points[np.all(np.isfinite(points), axis=1)] for points, _ in series.values()]
    stacked = np.vstack([points for points in finite if points.size]) if any(p.size for p in finite) \
        else np.zeros((1, 2))
    low, high = stacked.min(axis=0), stacked.max(axis=0)
    span = np.where(high - low > 0, high - low, 1.0)
    low, high = low - 0.05 * span, high + 0.05 * span

    def to_canvas(point: np.ndarray) -> Tuple[float, float]:
        u = MARGIN + (point[0] - low[0]) / (high[0] - low[0]) * (WIDTH - 2 * MARGIN)
        v = HEIGHT - MARGIN - (point[1] - low[1]) / (high[1] - low[1]) * (HEIGHT - 2 * MARGIN)
        return u, v

    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
             f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
             f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
             f'<text x="{WIDTH / 2}" y="{MARGIN / 2}" text-anchor="middle" font-size="14">{escape(title)}</text>',
             f'<line x1="{MARGIN}" y1="{HEIGHT - MARGIN}" x2="{WIDTH - MARGIN}" y2="{HEIGHT - MARGIN}" stroke="black"/>',
             f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{HEIGHT - MARGIN}" stroke="black"/>',
             f'<text x="{WIDTH / 2}" y="{HEIGHT - 15}" text-anchor="middle">{escape(x_label)}</text>',
             f'<text x="15" y="{HEIGHT / 2}" text-anchor="middle" transform="rotate(-90 15 {HEIGHT / 2})">'
             f'{escape(y_label)}</text>']
    for tick in _ticks(low[0], high[0]):
        u, _ = to_canvas(np.array([tick, low[1]]))
        lines.append(f'<text x="{u:.2f}" y="{HEIGHT - MARGIN + 16}" text-anchor="middle">{tick:.3g}</text>')
    for tick in _ticks(low[1], high[1]):
        _, v = to_canvas(np.array([low[0], tick]))
        lines.append(f'<text x="{MARGIN - 6}" y="{v:.2f}" text-anchor="end">{tick:.3g}</text>')
    for index, (name, (points, emphasized)) in enumerate(series.items()):
        color = PALETTE[index % len(PALETTE)]
        lines.append(f'<g class="series" data-name="{escape(name)}">')
        for point, strong in zip(points, emphasized):
            if not np.all(np.isfinite(point)):
                continue
            u, v = to_canvas(point)
            fill = color if strong else "none"
            lines.append(f'<circle cx="{u:.2f}" cy="{v:.2f}" r="{4 if strong else 3}" fill="{fill}" stroke="{color}"/>')
        lines.append("</g>")
        legend_y = MARGIN + 16 * index
        lines.append(f'<circle cx="{WIDTH - MARGIN - 90}" cy="{legend_y}" r="4" fill="{color}"/>')
        lines.append(f'<text x="{WIDTH - MARGIN - 80}" y="{legend_y + 4}">{escape(name)}</text>')
    lines.append("</svg>")
    return "\n".join(lines)
