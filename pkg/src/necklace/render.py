"""Static spacetime diagrams (ASCII and SVG) built from trace data only.

Time runs upward: the last row of the trace is drawn first.  Column ``k``
is site ``k``; odd columns carry left-movers, even columns right-movers.
Cells that differ from the background value are highlighted.
"""
from __future__ import annotations

from collections import Counter

import numpy as np

from .trace import SpacetimeTrace

BACKGROUND_CHAR = "."
DEFECT_CHAR = "#"

CELL = 12
COLORS = {
    "odd": "#f4f4f8",    # left-mover columns
    "even": "#fbf6ee",   # right-mover columns
    "defect": "#1f3b73",
    "translation": "#b03a2e",
}


def background_value(trace: SpacetimeTrace) -> int:
    """Most common value of the initial row; ties go to the larger value."""
    counts = Counter(int(v) for v in trace.rows[0])
    return max(counts, key=lambda v: (counts[v], v))


def render_ascii(trace: SpacetimeTrace, background: int | None = None) -> str:
    bg = background_value(trace) if background is None else background
    n_sites = 2 * trace.S
    width = len(str(trace.steps))
    lines = []
    for t in range(trace.steps, -1, -1):
        row = trace.rows[t]
        cells = "".join(DEFECT_CHAR if v != bg else BACKGROUND_CHAR for v in row)
        mark = "*" if trace.events[t] == "T" else " "
        lines.append(f"{t:>{width}}{mark}|{cells}|")
    axis = "".join(str(k % 10) for k in range(1, n_sites + 1))
    lines.append(" " * (width + 1) + "+" + "-" * n_sites + "+")
    lines.append(" " * (width + 2) + axis)
    return "\n".join(lines) + "\n"


def render_svg(trace: SpacetimeTrace, background: int | None = None, cell: int = CELL) -> str:
    bg = background_value(trace) if background is None else background
    n_rows, n_cols = trace.rows.shape
    w, h = n_cols * cell, n_rows * cell
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
    ]
    for t in range(n_rows):
        y = (n_rows - 1 - t) * cell
        for k in range(n_cols):
            v = int(trace.rows[t, k])
            if v != bg:
                fill = COLORS["translation"] if trace.events[t] == "T" else COLORS["defect"]
            else:
                fill = COLORS["odd"] if k % 2 == 0 else COLORS["even"]
            out.append(
                f'<rect x="{k * cell}" y="{y}" width="{cell}" height="{cell}" '
                f'fill="{fill}" data-t="{t}" data-site="{k + 1}" data-v="{v}"/>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def defect_mask(trace: SpacetimeTrace, background: int | None = None) -> np.ndarray:
    bg = background_value(trace) if background is None else background
    return trace.rows != bg
