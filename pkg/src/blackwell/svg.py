"""Minimal SVG plot of two-player payoff sets."""
from __future__ import annotations

import math
from fractions import Fraction

from .hull import hull_2d

WIDTH = HEIGHT = 480
MARGIN = 48
COLORS = ("#1f4e79", "#2e7d32", "#b71c1c", "#6a1b9a", "#e65100")


def clip_halfplane(poly, a, b, c) -> list:
    """Sutherland-Hodgman clip of a convex polygon to ``a*x + b*y >= c``."""
    out = []
    n = len(poly)
    for k in range(n):
        p, q = poly[k], poly[(k + 1) % n]
        fp = a * p[0] + b * p[1] - c
        fq = a * q[0] + b * q[1] - c
        if fp >= 0:
            out.append(p)
        if (fp > 0 > fq) or (fp < 0 < fq):
            t = fp / (fp - fq)
            out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    dedup = []
    for p in out:
        if not dedup or dedup[-1] != p:
            dedup.append(p)
    if len(dedup) > 1 and dedup[0] == dedup[-1]:
        dedup.pop()
    return dedup


def ir_region(points, levels) -> list:
    """conv(points) intersected with ``{w : w_i >= levels[i]}``."""
    poly = hull_2d([tuple(Fraction(v) for v in p) for p in points])
    poly = clip_halfplane(poly, 1, 0, Fraction(levels[0]))
    return clip_halfplane(poly, 0, 1, Fraction(levels[1])) if poly else []


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _label(p) -> str:
    return "(" + ", ".join(str(Fraction(v)) for v in p) + ")"


def render(hulls, feasible, levels, marks=(), title: str = "") -> str:
    """``hulls`` is a list of ``(epsilon, vertices)``; ``feasible`` the
    feasible payoff points; ``levels`` the individually rational levels;
    ``marks`` extra labelled points."""
    region = ir_region(feasible, levels) if feasible else []
    pts = [p for _, vs in hulls for p in vs] + list(feasible) + list(marks) + list(region) + [tuple(levels)]
    xs = [float(p[0]) for p in pts] or [0.0]
    ys = [float(p[1]) for p in pts] or [0.0]
    lo = math.floor(min(xs + ys)) - 1
    hi = math.ceil(max(xs + ys)) + 1
    span = hi - lo

    def X(v):
        return MARGIN + (float(v) - lo) / span * (WIDTH - 2 * MARGIN)

    def Y(v):
        return HEIGHT - MARGIN - (float(v) - lo) / span * (HEIGHT - 2 * MARGIN)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f"<title>{title}</title>",
        '<rect x="0" y="0" width="100%" height="100%" fill="white"/>',
    ]
    # axes and ticks
    out.append(f'<g class="axes" stroke="#444" stroke-width="1">')
    out.append(f'<line x1="{_fmt(X(lo))}" y1="{_fmt(Y(0))}" x2="{_fmt(X(hi))}" y2="{_fmt(Y(0))}"/>')
    out.append(f'<line x1="{_fmt(X(0))}" y1="{_fmt(Y(lo))}" x2="{_fmt(X(0))}" y2="{_fmt(Y(hi))}"/>')
    for t in range(lo, hi + 1):
        out.append(f'<line x1="{_fmt(X(t))}" y1="{_fmt(Y(0) - 3)}" x2="{_fmt(X(t))}" y2="{_fmt(Y(0) + 3)}"/>')
        out.append(f'<line x1="{_fmt(X(0) - 3)}" y1="{_fmt(Y(t))}" x2="{_fmt(X(0) + 3)}" y2="{_fmt(Y(t))}"/>')
    out.append("</g>")
    out.append('<g class="tick-labels" font-size="10" fill="#444">')
    for t in range(lo, hi + 1):
        if t:
            out.append(f'<text x="{_fmt(X(t) - 3)}" y="{_fmt(Y(0) + 14)}">{t}</text>')
            out.append(f'<text x="{_fmt(X(0) - 16)}" y="{_fmt(Y(t) + 3)}">{t}</text>')
    out.append("</g>")
    if region:
        coords = " ".join(f"{_fmt(X(p[0]))},{_fmt(Y(p[1]))}" for p in region)
        verts = " ".join(_label(p) for p in region)
        out.append(f'<polygon class="feasible-ir-region" points="{coords}" fill="#bbbbbb" fill-opacity="0.6" stroke="none" data-vertices="{verts}"/>')
    # individually rational boundary
    out.append(f'<g class="ir-boundary" stroke="#555" stroke-dasharray="4 3">')
    out.append(f'<line x1="{_fmt(X(levels[0]))}" y1="{_fmt(Y(lo))}" x2="{_fmt(X(levels[0]))}" y2="{_fmt(Y(hi))}"/>')
    out.append(f'<line x1="{_fmt(X(lo))}" y1="{_fmt(Y(levels[1]))}" x2="{_fmt(X(hi))}" y2="{_fmt(Y(levels[1]))}"/>')
    out.append("</g>")
    for k, (eps, verts) in enumerate(hulls):
        color = COLORS[k % len(COLORS)]
        label = " ".join(_label(p) for p in verts)
        if len(verts) == 1:
            p = verts[0]
            out.append(f'<circle class="hull" data-epsilon="{eps}" data-vertices="{label}" cx="{_fmt(X(p[0]))}" cy="{_fmt(Y(p[1]))}" r="5" fill="{color}"/>')
        elif len(verts) == 2:
            p, q = verts
            out.append(
                f'<line class="hull" data-epsilon="{eps}" data-vertices="{label}" x1="{_fmt(X(p[0]))}" y1="{_fmt(Y(p[1]))}" '
                f'x2="{_fmt(X(q[0]))}" y2="{_fmt(Y(q[1]))}" stroke="{color}" stroke-width="{4 - k * 0.8:.1f}"/>'
            )
        else:
            coords = " ".join(f"{_fmt(X(p[0]))},{_fmt(Y(p[1]))}" for p in verts)
            out.append(f'<polygon class="hull" data-epsilon="{eps}" data-vertices="{label}" points="{coords}" fill="{color}" fill-opacity="0.25" stroke="{color}"/>')
    for p in feasible:
        out.append(f'<circle class="feasible" data-point="{_label(p)}" cx="{_fmt(X(p[0]))}" cy="{_fmt(Y(p[1]))}" r="4" fill="black"/>')
        out.append(f'<text font-size="10" x="{_fmt(X(p[0]) + 6)}" y="{_fmt(Y(p[1]) - 6)}">{_label(p)}</text>')
    for p in marks:
        out.append(f'<circle class="mark" data-point="{_label(p)}" cx="{_fmt(X(p[0]))}" cy="{_fmt(Y(p[1]))}" r="4" fill="none" stroke="#b71c1c" stroke-width="2"/>')
        out.append(f'<text font-size="10" fill="#b71c1c" x="{_fmt(X(p[0]) + 6)}" y="{_fmt(Y(p[1]) + 14)}">{_label(p)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
