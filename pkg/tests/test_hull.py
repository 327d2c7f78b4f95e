from fractions import Fraction as F

from hypothesis import given, settings, strategies as st

from blackwell.hull import (
    caratheodory,
    convex_weights,
    distance_to_hull,
    extreme_points,
    hull_2d,
    in_hull,
)

from .oracles import jarvis_hull

coords = st.integers(-6, 6).map(F)
points2 = st.lists(st.tuples(coords, coords), min_size=1, max_size=12)


def test_square_with_interior_point():
    pts = [(0, 0), (2, 0), (2, 2), (0, 2), (1, 1), (1, 0)]
    assert set(hull_2d(pts)) == {(0, 0), (2, 0), (2, 2), (0, 2)}
    assert in_hull(pts, (F(1, 2), F(3, 2)))
    assert not in_hull(pts, (3, 0))


def test_segment_distance():
    d, lam = distance_to_hull([(0, 0), (1, 1)], (3, 0))
    assert d == 2
    assert distance_to_hull([(0, 0), (1, 1)], (F(1, 2), F(1, 2)))[0] == 0


def test_extreme_points_three_dimensions():
    cube = [(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)]
    pts = cube + [(F(1, 2), F(1, 2), F(1, 2)), (F(1, 2), 0, 0)]
    assert set(extreme_points(pts)) == set(cube)


@settings(max_examples=150, deadline=None)
@given(points2)
def test_hull_matches_gift_wrapping(pts):
    assert set(hull_2d(pts)) == jarvis_hull(pts)
    assert set(extreme_points(pts)) == jarvis_hull(pts)


@settings(max_examples=100, deadline=None)
@given(points2, st.tuples(coords, coords))
def test_membership_and_weights(pts, w):
    lam = convex_weights(pts, w)
    if lam is None:
        assert not in_hull(pts, w)
        assert distance_to_hull(pts, w)[0] > 0
        return
    assert all(x >= 0 for x in lam) and sum(lam) == 1
    assert tuple(sum(l * p[k] for l, p in zip(lam, pts)) for k in range(2)) == tuple(w)
    assert distance_to_hull(pts, w)[0] == 0
    reduced = caratheodory(pts, lam)
    assert len(reduced) <= 3
    assert sum(x for _, x in reduced) == 1
    assert tuple(sum(x * pts[k][c] for k, x in reduced) for c in range(2)) == tuple(w)
