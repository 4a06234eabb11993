"""Static SVG pictures of witnesses. Presentation only."""

from __future__ import annotations

from xml.sax.saxutils import escape

from .families import TransversalWitness
from .grids import GridWitness, PointSet


def _doc(w, h, body):
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
            f'viewBox="0 0 {w} {h}">\n<rect width="100%" height="100%" fill="white"/>\n'
            + "\n".join(body) + "\n</svg>\n")


def grid_svg(w: GridWitness, ps: PointSet | None = None, size: int = 480) -> str:
    pts = list(ps.points) if ps is not None else w.points()
    xs = sorted({p[0] for p in pts} | {p[0] for p in w.points()})
    ys = sorted({p[1] for p in pts} | {p[1] for p in w.points()})
    pad = 20
    cx = {x: pad + i * (size - 2 * pad) / max(len(xs) - 1, 1) for i, x in enumerate(xs)}
    cy = {y: size - pad - i * (size - 2 * pad) / max(len(ys) - 1, 1) for i, y in enumerate(ys)}
    body = []
    for lo, hi in w.col_blocks:
        inside = [cx[x] for x in xs if lo <= x <= hi]
        if inside:
            body.append(f'<rect x="{min(inside) - 4:.1f}" y="0" width="{max(inside) - min(inside) + 8:.1f}" '
                        f'height="{size}" fill="#eef" stroke="none"/>')
    chosen = set(w.points())
    for p in pts:
        fill = "#c03" if p in chosen else "#999"
        body.append(f'<circle cx="{cx[p[0]]:.1f}" cy="{cy[p[1]]:.1f}" r="3" fill="{fill}"/>')
    return _doc(size, size, body)


def transversal_svg(wit: TransversalWitness, size: int = 480) -> str:
    """A above, C on the right, B as a k x k array, edges as in T_k."""
    k = wit.k
    step = (size - 80) / max(k, 1)
    pos = {}
    for i, a in enumerate(wit.A):
        pos[a] = (40 + i * step + step / 2, 20)
    for j, c in enumerate(wit.C):
        pos[c] = (size - 20, 60 + (k - 1 - j) * step + step / 2)
    for i in range(k):
        for j in range(k):
            pos[wit.B[i][j]] = (40 + i * step + step / 2, 60 + (k - 1 - j) * step + step / 2)
    body = []
    for i, a in enumerate(wit.A):
        for i2 in range(i, k):
            for j2 in range(k):
                (x1, y1), (x2, y2) = pos[a], pos[wit.B[i2][j2]]
                body.append(f'<line x1="{x1:.1f}" y1="{y1:.1f}" x2="{x2:.1f}" y2="{y2:.1f}" stroke="#6cf" stroke-width="0.6"/>')
    for j, c in enumerate(wit.C):
        for i2 in range(k):
            for j2 in range(j + 1):
                (x1, y1), (x2, y2) = pos[c], pos[wit.B[i2][j2]]
                body.append(f'<line x1="{x1:.1f}" y1="{y1:.1f}" x2="{x2:.1f}" y2="{y2:.1f}" stroke="#3a8" stroke-width="0.6"/>')
    colour = {**{a: "#06c" for a in wit.A}, **{c: "#084" for c in wit.C}}
    for v, (x, y) in sorted(pos.items()):
        body.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="5" fill="{colour.get(v, "#c03")}"/>')
        body.append(f'<text x="{x + 6:.1f}" y="{y - 6:.1f}" font-size="9">{escape(str(v))}</text>')
    return _doc(size, size, body)
