"""Independent reference computations used only by the tests."""
from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np


def support_enumeration_value(M):
    """Value of the zero-sum game (row maximises) by enumerating equal-size
    supports and solving indifference systems in floating point."""
    M = np.asarray(M, dtype=float)
    m, n = M.shape
    best = None
    for k in range(1, min(m, n) + 1):
        for I in itertools.combinations(range(m), k):
            for J in itertools.combinations(range(n), k):
                # row strategy x on I making columns J indifferent at value v
                A = np.zeros((k + 1, k + 1))
                A[:k, :k] = M[np.ix_(I, J)].T
                A[:k, k] = -1
                A[k, :k] = 1
                b = np.zeros(k + 1)
                b[k] = 1
                B = np.zeros((k + 1, k + 1))
                B[:k, :k] = M[np.ix_(I, J)]
                B[:k, k] = -1
                B[k, :k] = 1
                try:
                    sx = np.linalg.solve(A, b)
                    sy = np.linalg.solve(B, b)
                except np.linalg.LinAlgError:
                    continue
                x = np.zeros(m)
                y = np.zeros(n)
                x[list(I)] = sx[:k]
                y[list(J)] = sy[:k]
                v = sx[k]
                if (x < -1e-9).any() or (y < -1e-9).any():
                    continue
                if (M @ y > v + 1e-9).any() or (x @ M < v - 1e-9).any():
                    continue
                return v, x, y
    raise AssertionError("no equilibrium support found")


def zero_column_exists(M) -> bool:
    """For a 0/1 matrix, the opponent can hold the row player to 0 iff some
    column is all zeros."""
    M = np.asarray(M)
    return bool((M == 0).all(axis=0).any())


def compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for k in range(total + 1):
        for rest in compositions(total - k, parts - 1):
            yield (k,) + rest


def cycle_frequency_vectors(profiles, max_len: int):
    """Every frequency vector of a cycle of length <= max_len."""
    seen = set()
    for q in range(1, max_len + 1):
        for comp in compositions(q, len(profiles)):
            key = tuple(Fraction(c, q) for c in comp)
            if key not in seen:
                seen.add(key)
                yield {a: f for a, f in zip(profiles, key) if f}


def jarvis_hull(points) -> set:
    """Vertex set of the 2-D convex hull by gift wrapping (exact)."""
    pts = sorted(set((Fraction(p[0]), Fraction(p[1])) for p in points))
    if len(pts) <= 2:
        return set(pts)

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    def dist2(a, b):
        return (a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2

    start = pts[0]
    hull = []
    p = start
    while True:
        hull.append(p)
        q = pts[0] if pts[0] != p else pts[1]
        for r in pts:
            if r == p:
                continue
            c = cross(p, q, r)
            if c < 0 or (c == 0 and dist2(p, r) > dist2(p, q)):
                q = r
        p = q
        if p == start or len(hull) > len(pts):
            break
    return set(hull)


def brute_force_intersection(weights, events) -> Fraction:
    return sum((w for k, w in enumerate(weights) if all(k in e for e in events)), Fraction(0))
