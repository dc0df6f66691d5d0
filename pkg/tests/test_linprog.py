"""Simplex solver: known optima, status codes, and the degenerate case
that used to cycle under naive pivoting."""

from fractions import Fraction

from vinberg.linprog import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    maximize_with_free_vars,
    solve_lp,
)


def test_bounded_optimum_exact():
    # max x + y  s.t.  x + 2y <= 4, 3x + y <= 6: optimum 14/5 at (8/5, 6/5).
    status, x, value = solve_lp([1, 1], [[1, 2], [3, 1]], [4, 6])
    assert status == OPTIMAL
    assert value == Fraction(14, 5)
    assert x == [Fraction(8, 5), Fraction(6, 5)]


def test_equality_constraints():
    status, x, value = solve_lp([1, 2], a_eq=[[1, 1]], b_eq=[1])
    assert status == OPTIMAL
    assert value == Fraction(2)
    assert x == [Fraction(0), Fraction(1)]


def test_unbounded_and_infeasible():
    status, x, value = solve_lp([1], [[-1]], [0])
    assert status == UNBOUNDED and x is None
    status, x, value = solve_lp([1], [[1], [-1]], [-1, -2])
    assert status == INFEASIBLE and x is None


def test_float_mode_matches_exact():
    status, x, value = solve_lp([1.0, 1.0], [[1.0, 2.0], [3.0, 1.0]], [4.0, 6.0], tol=1e-9)
    assert status == OPTIMAL
    assert abs(value - 2.8) <= 1e-9
    assert abs(x[0] - 1.6) <= 1e-9 and abs(x[1] - 1.2) <= 1e-9


def test_degenerate_problem_terminates():
    # Beale's cycling example; Bland's rule must terminate at value 1/20.
    c = [Fraction(3, 4), -150, Fraction(1, 50), -6]
    a_ub = [
        [Fraction(1, 4), -60, Fraction(-1, 25), 9],
        [Fraction(1, 2), -90, Fraction(-1, 50), 3],
        [0, 0, 1, 0],
    ]
    b_ub = [0, 0, 1]
    status, x, value = solve_lp(c, a_ub, b_ub)
    assert status == OPTIMAL
    assert value == Fraction(1, 20)


def test_free_variables():
    # max x  s.t.  x + y = 0, x <= 3 with both variables free.
    status, x, value = maximize_with_free_vars(
        [1, 0], [[1, 0]], [3], [[1, 1]], [0], nfree=2
    )
    assert status == OPTIMAL
    assert value == Fraction(3)
    assert x == [Fraction(3), Fraction(-3)]
