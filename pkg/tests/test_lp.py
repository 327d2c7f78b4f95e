from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from blackwell.lp import linprog, null_vector, solve_exact


def test_exact_small_lp():
    # max x + y  s.t.  x + 2y <= 4, 3x + y <= 6
    res = linprog([1, 1], [[1, 2], [3, 1]], [4, 6])
    assert res.optimal
    assert res.value == F(14, 5)
    assert res.x == [F(8, 5), F(6, 5)]


def test_equality_and_infeasible():
    res = linprog([1, 0], A_eq=[[1, 1]], b_eq=[1])
    assert res.optimal and res.value == 1
    assert linprog([1], [[1]], [1], [[1]], [2]).status == "infeasible"


def test_unbounded():
    assert linprog([1, 0], [[-1, 1]], [1]).status == "unbounded"


def test_float_route_matches_exact():
    A = [[1, 2], [3, 1]]
    exact = linprog([1, 1], A, [4, 6])
    flt = linprog([1.0, 1.0], [[float(v) for v in r] for r in A], [4.0, 6.0])
    assert abs(flt.value - float(exact.value)) < 1e-9


def test_solve_exact_and_null_vector():
    assert solve_exact([[2, 1], [1, 3]], [3, 5]) == [F(4, 5), F(7, 5)]
    assert solve_exact([[1, 1], [2, 2]], [1, 2]) is None
    v = null_vector([[1, 1, 1], [1, 2, 3]])
    assert v is not None and any(v)
    assert all(sum(F(a) * b for a, b in zip(row, v)) == 0 for row in [[1, 1, 1], [1, 2, 3]])


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=1, max_size=4),
       st.lists(st.integers(0, 6), min_size=4, max_size=4),
       st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_weak_duality_certificate(A, b, c):
    """Feasible optima are primal feasible and no better than the box relaxation."""
    b = b[: len(A)]
    box = [[1 if j == k else 0 for j in range(3)] for k in range(3)]
    res = linprog(c, A + box, b + [10, 10, 10])
    assert res.optimal  # x = 0 is feasible and the box bounds it
    x = res.x
    assert all(v >= 0 for v in x)
    assert all(sum(a * v for a, v in zip(row, x)) <= rhs for row, rhs in zip(A, b))
    assert res.value == sum(ci * xi for ci, xi in zip(c, x))
    assert res.value <= sum(max(0, ci) * 10 for ci in c)
