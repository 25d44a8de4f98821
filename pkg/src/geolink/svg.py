"""Deterministic SVG rendering of lattice polygons."""
from __future__ import annotations

from .exact_core import vec

CELL = 40
MARGIN = 1


def emit_svg(polygon) -> str:
    """Unit grid, lattice points, polygon outline and an origin marker.

    Output depends only on the vertex list, so equal polygons give equal bytes.
    """
    pts = [vec(p) for p in polygon.vertices]
    xs = [p.x for p in pts] + [0]
    ys = [p.y for p in pts] + [0]
    x0, x1 = min(xs) - MARGIN, max(xs) + MARGIN
    y0, y1 = min(ys) - MARGIN, max(ys) + MARGIN
    w, h = (x1 - x0) * CELL, (y1 - y0) * CELL

    # y axis points up in the lattice, down in SVG
    def X(x):
        return (x - x0) * CELL

    def Y(y):
        return (y1 - y) * CELL

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        '<g class="grid" stroke="#ccc" stroke-width="1">',
    ]
    for x in range(x0, x1 + 1):
        out.append(f'<line x1="{X(x)}" y1="0" x2="{X(x)}" y2="{h}"/>')
    for y in range(y0, y1 + 1):
        out.append(f'<line x1="0" y1="{Y(y)}" x2="{w}" y2="{Y(y)}"/>')
    out.append("</g>")
    out.append('<g class="lattice" fill="#888">')
    for x in range(x0, x1 + 1):
        for y in range(y0, y1 + 1):
            out.append(f'<circle cx="{X(x)}" cy="{Y(y)}" r="2"/>')
    out.append("</g>")
    coords = " ".join(f"{X(p.x)},{Y(p.y)}" for p in pts)
    distinct = {(p.x, p.y) for p in pts}
    if len(distinct) <= 2:
        a, b = min(pts), max(pts)
        out.append(f'<line class="outline" x1="{X(a.x)}" y1="{Y(a.y)}" x2="{X(b.x)}" y2="{Y(b.y)}" '
                   'stroke="#c00" stroke-width="3"/>')
    else:
        out.append(f'<polygon class="outline" points="{coords}" fill="#fdd" stroke="#c00" stroke-width="3"/>')
    for p in pts:
        out.append(f'<circle class="vertex" cx="{X(p.x)}" cy="{Y(p.y)}" r="4" fill="#c00"/>')
    out.append(f'<circle class="origin" cx="{X(0)}" cy="{Y(0)}" r="6" fill="none" stroke="#00c" stroke-width="2"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
