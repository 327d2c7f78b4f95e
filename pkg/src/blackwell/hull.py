"""Exact convex-hull utilities in low dimension."""
from __future__ import annotations

from fractions import Fraction

from .lp import linprog, null_vector


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def hull_2d(points) -> list:
    """Vertices of the convex hull in counter-clockwise order starting from
    the lexicographically smallest point (monotone chain, collinear points
    dropped)."""
    pts = sorted(set(tuple(p) for p in points))
    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    out = lower[:-1] + upper[:-1]
    if len(out) == 2 and out[0] == out[1]:
        return out[:1]
    return out


def in_hull(points, w) -> bool:
    """Exact membership of ``w`` in conv(points)."""
    return convex_weights(points, w) is not None


def convex_weights(points, w):
    """Weights ``lam >= 0`` summing to 1 with ``sum lam_k p_k = w``, or ``None``."""
    points = [tuple(Fraction(v) for v in p) for p in points]
    if not points:
        return None
    d = len(points[0])
    A_eq = [[p[j] for p in points] for j in range(d)] + [[Fraction(1)] * len(points)]
    b_eq = [Fraction(w[j]) for j in range(d)] + [Fraction(1)]
    res = linprog([Fraction(0)] * len(points), [], [], A_eq, b_eq)
    return res.x if res.optimal else None


def extreme_points(points) -> list:
    """Points not in the hull of the others (duplicates collapsed); exact."""
    pts = list(dict.fromkeys(tuple(Fraction(v) for v in p) for p in points))
    if not pts:
        return []
    if len(pts[0]) == 2:
        return hull_2d(pts)
    if len(pts[0]) == 1:
        return sorted({min(pts), max(pts)})
    return [p for k, p in enumerate(pts) if not in_hull(pts[:k] + pts[k + 1:], p)]


def distance_to_hull(points, w):
    """Infinity-norm distance from ``w`` to conv(points) and the weights of
    a nearest point: ``(distance, weights)``."""
    points = [tuple(Fraction(v) for v in p) for p in points]
    w = [Fraction(v) for v in w]
    k, d = len(points), len(w)
    # variables: lam_1..lam_k, t ; maximize -t
    A_ub, b_ub = [], []
    for j in range(d):
        A_ub.append([p[j] for p in points] + [Fraction(-1)])
        b_ub.append(w[j])
        A_ub.append([-p[j] for p in points] + [Fraction(-1)])
        b_ub.append(-w[j])
    A_eq = [[Fraction(1)] * k + [Fraction(0)]]
    res = linprog([Fraction(0)] * k + [Fraction(-1)], A_ub, b_ub, A_eq, [Fraction(1)])
    return res.x[k], res.x[:k]


def caratheodory(points, weights):
    """Reduce a convex combination to at most ``d + 1`` points with the same
    barycentre.  Returns ``[(index, weight), ...]`` with positive weights."""
    points = [tuple(Fraction(v) for v in p) for p in points]
    active = [(k, Fraction(w)) for k, w in enumerate(weights) if w > 0]
    if not active:
        return []
    d = len(points[0])
    while len(active) > d + 1:
        # affine dependence: sum mu_k p_k = 0, sum mu_k = 0
        A = [[points[k][j] for k, _ in active] for j in range(d)] + [[Fraction(1)] * len(active)]
        mu = null_vector(A)
        if mu is None:
            break
        if not any(m > 0 for m in mu):
            mu = [-m for m in mu]
        step = min(w / m for (_, w), m in zip(active, mu) if m > 0)
        active = [(k, w - step * m) for (k, w), m in zip(active, mu)]
        active = [(k, w) for k, w in active if w > 0]
    return active
