from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperindex.exactcore import (
    EQ,
    GE,
    LE,
    InequalityPolytope,
    LinearProgram,
    fmt,
    in_convex_hull,
    lp_solve,
    matrix_det,
    polytope_dimension,
    rat,
    solve_linear,
)

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)


def test_rat_and_fmt():
    assert rat("3/4") == F(3, 4)
    assert rat(2) == F(2)
    assert fmt(F(6, 4)) == "3/2" and fmt(F(4, 2)) == "2"
    with pytest.raises((ValueError, ZeroDivisionError)):
        rat("1/0")


def test_lp_box():
    res = lp_solve(LinearProgram.build([1], [([1], LE, 1)]))
    assert res.optimal and res.value == 1 and tuple(res.point) == (1,)


def test_lp_simplex_face():
    res = lp_solve(LinearProgram.build([1, 1], [([1, 1], LE, 1)]))
    assert res.value == 1 and sum(res.point) == 1 and all(v >= 0 for v in res.point)


def test_lp_entry_bound():
    res = lp_solve(LinearProgram.build([3], [([1], LE, 1), ([3], LE, 2)]))
    assert res.value == 2 and tuple(res.point) == (F(2, 3),)


def test_lp_infeasible_and_unbounded():
    assert not lp_solve(LinearProgram.build([1], [([1], LE, -1)])).optimal
    assert lp_solve(LinearProgram.build([1], [([1], LE, -1)])).status == "infeasible"
    assert lp_solve(LinearProgram.build([1], [([1], GE, 0)])).status == "unbounded"


def test_lp_free_variables_and_equalities():
    # min t s.t. t >= x - 3, t >= 3 - x, x = 1, with t free
    lp = LinearProgram.build([1, 0], [([1, -1], GE, -3), ([1, 1], GE, 3), ([0, 1], EQ, 1)], bounds=[(None, None), (0, None)], maximize=False)
    res = lp_solve(lp)
    assert res.value == 2 and tuple(res.point) == (2, 1)


def test_in_convex_hull_examples():
    assert in_convex_hull((1, 2), [(1, 2), (3, 4)]).weights == (1, 0)
    res = in_convex_hull((2, 3), [(1, 2), (3, 4)])
    assert res.inside and res.weights == (F(1, 2), F(1, 2))
    # Entry payoff-pair rows: 3/4 Out + 1/4 In-L
    out, inl = (2, 2, 2, 2), (3, 1, 0, 0)
    p = tuple(F(3, 4) * a + F(1, 4) * b for a, b in zip(out, inl))
    assert p == (F(9, 4), F(7, 4), F(3, 2), F(3, 2))
    res = in_convex_hull(p, [out, inl])
    assert res.inside and res.weights == (F(3, 4), F(1, 4))
    assert not in_convex_hull((5, 5), [(1, 2), (3, 4)]).inside


def test_polytope_dimension_examples():
    simplex = InequalityPolytope(("a", "b", "c"), ())
    assert polytope_dimension(simplex).full_dimensional
    entry = InequalityPolytope(("l", "r"), (((3, 0), 2, LE),))
    dim = polytope_dimension(entry)
    assert dim.full_dimensional
    assert entry.contains(dim.point) and 3 * dim.point[0] < 2
    point = InequalityPolytope(("l", "r"), (((1, 0), 0, LE), ((-1, 0), 0, LE)))
    dim = polytope_dimension(point)
    assert not dim.full_dimensional and dim.dimension == 0
    empty = InequalityPolytope(("l", "r"), (((1, 1), 0, LE),))
    assert polytope_dimension(empty).empty


def test_det_and_solve():
    assert matrix_det([[1, 2], [3, 4]]) == -2
    assert matrix_det([[1, 2], [2, 4]]) == 0
    assert tuple(solve_linear([[2, 1], [1, 3]], [3, 5])) == (F(4, 5), F(7, 5))


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.tuples(rationals, rationals, st.fractions(min_value=0, max_value=5, max_denominator=4)), min_size=1, max_size=4),
    rationals,
    rationals,
)
def test_lp_optimal_point_is_feasible(cons, c1, c2):
    rows = [([a, b], LE, r) for a, b, r in cons] + [([1, 0], LE, 3), ([0, 1], LE, 3)]
    lp = LinearProgram.build([c1, c2], rows)
    res = lp_solve(lp)
    assert res.optimal  # origin is feasible and the box bounds it
    x = res.point
    assert all(v >= 0 for v in x)
    for coeffs, _, rhs in rows:
        assert coeffs[0] * x[0] + coeffs[1] * x[1] <= rhs
    assert c1 * x[0] + c2 * x[1] == res.value
    again = lp_solve(LinearProgram.build([c1, c2], rows))
    assert again.point == res.point


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(rationals, rationals, rationals), min_size=1, max_size=5), st.data())
def test_hull_weights_reproduce_point(gens, data):
    w = data.draw(st.lists(st.integers(0, 5), min_size=len(gens), max_size=len(gens)))
    if not any(w):
        w[0] = 1
    s = sum(w)
    p = tuple(sum(F(wi, s) * g[c] for wi, g in zip(w, gens)) for c in range(3))
    res = in_convex_hull(p, gens)
    assert res.inside
    assert sum(res.weights) == 1 and all(v >= 0 for v in res.weights)
    assert tuple(sum(wi * g[c] for wi, g in zip(res.weights, gens)) for c in range(3)) == p


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(rationals, rationals, st.fractions(min_value=-1, max_value=3, max_denominator=4)), min_size=1, max_size=3))
def test_full_dimensional_iff_positive_slack(cons):
    poly = InequalityPolytope(("a", "b"), tuple(((a, b), r, LE) for a, b, r in cons))
    dim = polytope_dimension(poly)
    # slack program: max s with a.x + s <= r for each inequality, x on the open simplex
    rows = [([a, b, 1], LE, r) for a, b, r in cons] + [([1, 1, 0], EQ, 1), ([-1, 0, 1], LE, 0), ([0, -1, 1], LE, 0)]
    lp = lp_solve(LinearProgram.build([0, 0, 1], rows, bounds=[(0, None), (0, None), (None, 1)]))
    if all(a != b for a, b, _ in cons):
        assert dim.full_dimensional == (lp.optimal and lp.value > 0)
    else:
        # an inequality constant on the simplex is either vacuous or empties the set
        live = [(a, b, r) for a, b, r in cons if a != b]
        vacuous = all(a <= r for a, b, r in cons if a == b)
        rest = polytope_dimension(InequalityPolytope(("a", "b"), tuple(((a, b), r, LE) for a, b, r in live)))
        assert dim.full_dimensional == (vacuous and rest.full_dimensional)
