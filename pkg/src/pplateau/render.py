"""Deterministic SVG pictures of sunflower scenarios.

Fixed canvas, fixed palette, fixed element order, fixed number formatting:
the same scenario and solution always produce byte-identical output. The
disk sits in the middle, inner edges are arcs of the inner circle (budget
multiplicity 2, drawn against the disk orientation), petals bulge outward to
their arcs (multiplicity 1, dashed when dropped). Coefficients of a supplied
minimizer are written into the cells they belong to.
"""

from __future__ import annotations

import math
from typing import Optional

from .complexes import Chain
from .numeric import format_rational
from .sunflower import SunflowerScenario, classify_petals, thresholds

SIZE = 640
CX = CY = SIZE / 2
R_INNER = 120.0
R_BULGE = 205.0
R_LABEL = 168.0

CLASS_COLOR = {"negative": "#2a7f3f", "neutral": "#777777", "positive": "#c05020"}


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _pt(angle: float, radius: float) -> tuple[float, float]:
    return CX + radius * math.cos(angle), CY + radius * math.sin(angle)


def render_sunflower(s: SunflowerScenario, solution_chain: Optional[Chain] = None) -> str:
    k = s.petals
    classes = classify_petals(s)
    klass = {}
    for name, idxs in (("negative", classes.negative), ("neutral", classes.neutral),
                       ("positive", classes.positive)):
        for i in idxs:
            klass[i] = name
    th = thresholds(s)
    angles = [-math.pi / 2 + 2 * math.pi * i / k for i in range(k + 1)]

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        '<defs><marker id="arrow" viewBox="0 0 8 8" refX="6" refY="4" markerWidth="6" '
        'markerHeight="6" orient="auto"><path d="M0,0 L8,4 L0,8 z" fill="#333333"/>'
        "</marker></defs>",
        f'<rect width="{SIZE}" height="{SIZE}" fill="#ffffff"/>',
        f'<circle cx="{_fmt(CX)}" cy="{_fmt(CY)}" r="{_fmt(R_INNER)}" fill="#f2e8c9" '
        'stroke="none"/>',
    ]

    # Petal bodies first so edges draw on top.
    for i in range(k):
        a1, a2 = angles[i], angles[i + 1]
        x1, y1 = _pt(a1, R_INNER)
        x2, y2 = _pt(a2, R_INNER)
        qx, qy = _pt((a1 + a2) / 2, R_BULGE)
        fill = "#eeeeee" if not s.feasible(i) else "#dce9dc" if klass[i] == "negative" \
            else "#e4e4e4" if klass[i] == "neutral" else "#f0ddd0"
        large = 1 if (a2 - a1) > math.pi else 0
        parts.append(
            f'<path d="M {_fmt(x1)} {_fmt(y1)} Q {_fmt(qx)} {_fmt(qy)} {_fmt(x2)} {_fmt(y2)} '
            f'A {_fmt(R_INNER)} {_fmt(R_INNER)} 0 {large} 0 {_fmt(x1)} {_fmt(y1)} z" '
            f'fill="{fill}" stroke="none"/>')

    # Inner edges: arcs of the inner circle. They carry the budget's
    # orientation, which runs against the disk boundary, so they are drawn
    # in the direction opposite to the outer arcs.
    for i in range(k):
        a1, a2 = angles[i], angles[i + 1]
        x1, y1 = _pt(a1, R_INNER)
        x2, y2 = _pt(a2, R_INNER)
        large = 1 if (a2 - a1) > math.pi else 0
        parts.append(
            f'<path d="M {_fmt(x2)} {_fmt(y2)} A {_fmt(R_INNER)} {_fmt(R_INNER)} 0 {large} 0 '
            f'{_fmt(x1)} {_fmt(y1)}" fill="none" stroke="#1f4e8c" stroke-width="3" '
            'marker-end="url(#arrow)"/>')
        mx, my = _pt((a1 + a2) / 2, R_INNER - 14)
        parts.append(
            f'<text x="{_fmt(mx)}" y="{_fmt(my)}" font-size="11" text-anchor="middle" '
            f'fill="#1f4e8c">{s.inner_edges[i]} (2)</text>')

    # Outer arcs, dashed when dropped from the budget.
    for i in range(k):
        a1, a2 = angles[i], angles[i + 1]
        x1, y1 = _pt(a1, R_INNER)
        x2, y2 = _pt(a2, R_INNER)
        qx, qy = _pt((a1 + a2) / 2, R_BULGE)
        dash = ' stroke-dasharray="6 5"' if not s.feasible(i) else ""
        color = "#999999" if not s.feasible(i) else "#8c2f1f"
        parts.append(
            f'<path d="M {_fmt(x1)} {_fmt(y1)} Q {_fmt(qx)} {_fmt(qy)} {_fmt(x2)} {_fmt(y2)}" '
            f'fill="none" stroke="{color}" stroke-width="2.5"{dash} marker-end="url(#arrow)"/>')
        lx, ly = _pt((a1 + a2) / 2, R_BULGE * 0.985 - 14)
        tag = "dropped" if not s.feasible(i) else "1"
        parts.append(
            f'<text x="{_fmt(lx)}" y="{_fmt(ly)}" font-size="11" text-anchor="middle" '
            f'fill="{color}">{s.arc_edges[i]} ({tag})</text>')

    # Cell labels with class marks and optional coefficients.
    mark = {"negative": "-", "neutral": "0", "positive": "+"}
    for i in range(k):
        mid = (angles[i] + angles[i + 1]) / 2
        lx, ly = _pt(mid, R_LABEL)
        text = f"{s.petal_cells[i]} [{mark[klass[i]]}]"
        if solution_chain is not None:
            text += f" c={solution_chain.get(s.petal_cells[i])}"
        color = CLASS_COLOR[klass[i]]
        parts.append(
            f'<text x="{_fmt(lx)}" y="{_fmt(ly)}" font-size="12" text-anchor="middle" '
            f'fill="{color}">{text}</text>')
    disk_text = "disk"
    if solution_chain is not None:
        disk_text += f" a={solution_chain.get(s.disk)}"
    parts.append(
        f'<text x="{_fmt(CX)}" y="{_fmt(CY)}" font-size="15" text-anchor="middle" '
        f'fill="#333333">{disk_text}</text>')

    variant = "partial" if s.dropped else "full"
    head = (f"pairing d={format_rational(s.disk_pairing)}  "
            f"thresholds: {format_rational(th.lower)}, {format_rational(th.middle)}, "
            f"{format_rational(th.upper)}  ({variant})")
    parts.append(
        f'<text x="12" y="22" font-size="13" fill="#222222">{head}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
