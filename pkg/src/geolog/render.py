"""SVG pictures of one and two dimensional geographies."""

from __future__ import annotations

from functools import cmp_to_key
from xml.sax.saxutils import escape

from .geography.classify import _angle_cmp
from .geography.engine import Geography

PALETTE = ["#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5", "#bc80bd", "#ccebc5"]
OUTSIDE = "#e0e0e0"
SIZE = 400
MARGIN = 50


def _f(x) -> str:
    return f"{float(x):.3f}".rstrip("0").rstrip(".")


def _order_polygon(pts):
    cx = sum(p[0] for p in pts) / len(pts)
    cy = sum(p[1] for p in pts) / len(pts)
    return sorted(pts, key=cmp_to_key(lambda p, q: _angle_cmp((p[0] - cx, p[1] - cy), (q[0] - cx, q[1] - cy))))


def _colours(g: Geography) -> dict:
    models = sorted({repr(c.model) for c in g.inside_classes if c.dim == g.dim})
    return {m: PALETTE[i % len(PALETTE)] for i, m in enumerate(models)}


def _bounds(g: Geography):
    vs = g.region.vertices
    lo = [min(v[i] for v in vs) for i in range(g.dim)]
    hi = [max(v[i] for v in vs) for i in range(g.dim)]
    return lo, hi


def render_svg(g: Geography, labels: tuple[str, ...] | None = None) -> str:
    """SVG of a geography over a 1D or 2D parameter region."""
    if g.dim not in (1, 2):
        raise ValueError("only one and two dimensional geographies are drawn")
    lo, hi = _bounds(g)
    labels = labels or tuple(f"t{i + 1}" for i in range(g.dim))
    col = _colours(g)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE + 2 * MARGIN}" height="{(SIZE if g.dim == 2 else 60) + 2 * MARGIN}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]

    def X(t):
        return MARGIN + SIZE * (t - lo[0]) / (hi[0] - lo[0])

    if g.dim == 1:
        y = MARGIN + 30
        for c in g.classes:
            if c.dim != 1:
                continue
            a, b = sorted(v[0] for v in c.closure.vertices)
            fill = col.get(repr(c.model), "#999999") if c.inside else OUTSIDE
            out.append(f'<line x1="{_f(X(a))}" y1="{y}" x2="{_f(X(b))}" y2="{y}" stroke="{fill}" stroke-width="14"/>')
        ticks = sorted({v[0] for c in g.classes for v in c.closure.vertices if lo[0] < v[0] < hi[0]})
        for t in ticks:
            out.append(f'<line x1="{_f(X(t))}" y1="{y - 12}" x2="{_f(X(t))}" y2="{y + 12}" stroke="black" stroke-width="2"/>')
            out.append(f'<text x="{_f(X(t))}" y="{y + 30}" font-size="13" text-anchor="middle">{escape(str(t))}</text>')
        out.append(f'<text x="{_f(X(hi[0]) + 10)}" y="{y + 4}" font-size="13">{escape(labels[0])}</text>')
        out.append("</svg>")
        return "\n".join(out) + "\n"

    def Y(t):
        return MARGIN + SIZE - SIZE * (t - lo[1]) / (hi[1] - lo[1])

    for c in g.classes:
        if c.dim != 2:
            continue
        pts = _order_polygon(c.closure.vertices)
        fill = col.get(repr(c.model), "#999999") if c.inside else OUTSIDE
        path = " ".join(f"{_f(X(p[0]))},{_f(Y(p[1]))}" for p in pts)
        out.append(f'<polygon points="{path}" fill="{fill}" stroke="none"/>')
    for c in g.classes:
        if c.dim != 1:
            continue
        a, b = c.closure.vertices[:2]
        width = 2 if c.inside else 1
        out.append(f'<line x1="{_f(X(a[0]))}" y1="{_f(Y(a[1]))}" x2="{_f(X(b[0]))}" y2="{_f(Y(b[1]))}" stroke="black" stroke-width="{width}"/>')
    ticks = set()
    for c in g.classes:
        if c.dim == 0:
            p = c.point
            out.append(f'<circle cx="{_f(X(p[0]))}" cy="{_f(Y(p[1]))}" r="2.5" fill="black"/>')
        for p in c.closure.vertices:
            if p[1] == lo[1] and lo[0] < p[0] < hi[0]:
                ticks.add((0, p[0]))
            if p[0] == lo[0] and lo[1] < p[1] < hi[1]:
                ticks.add((1, p[1]))
    for axis, t in sorted(ticks):
        if axis == 0:
            out.append(f'<text x="{_f(X(t))}" y="{_f(Y(lo[1]) + 18)}" font-size="12" text-anchor="middle">{escape(str(t))}</text>')
        else:
            out.append(f'<text x="{_f(X(lo[0]) - 6)}" y="{_f(Y(t) + 4)}" font-size="12" text-anchor="end">{escape(str(t))}</text>')
    out.append(f'<text x="{_f(X(hi[0]))}" y="{_f(Y(lo[1]) + 36)}" font-size="13" text-anchor="end">{escape(labels[0])}</text>')
    out.append(f'<text x="{_f(X(lo[0]) - 36)}" y="{_f(Y(hi[1]))}" font-size="13">{escape(labels[1])}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
