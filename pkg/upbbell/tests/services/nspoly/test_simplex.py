"""Tests for the exact simplex."""

from fractions import Fraction

import pytest

from upbbell.errors.exceptions import InfeasibleError, SolverError, UnboundedError
from upbbell.services.nspoly import LinearProgram, maximize, minimize


@pytest.fixture
def simplex_lp():
    """max x0 + 2 x1 on the probability simplex in three variables."""
    return LinearProgram(
        n_vars=3,
        rows=[{0: 1, 1: 1, 2: 1}],
        rhs=[Fraction(1)],
        objective={0: Fraction(1), 1: Fraction(2)},
    )


class TestMaximize:
    """Maximization from a known vertex."""

    def test_optimum(self, simplex_lp):
        solution = maximize(simplex_lp, [0, 0, 1])
        assert solution.value == 2
        assert solution.x == (0, 1, 0)
        assert solution.pivots == 2

    def test_start_at_optimum(self, simplex_lp):
        solution = maximize(simplex_lp, [0, 1, 0])
        assert solution.value == 2
        assert solution.pivots == 0

    def test_minimize(self, simplex_lp):
        solution = minimize(simplex_lp, [0, 1, 0])
        assert solution.value == 0
        assert simplex_lp.is_feasible(solution.x)

    def test_exact_fractions(self):
        lp = LinearProgram(
            n_vars=3,
            rows=[{0: 3, 1: 1, 2: 1}],
            rhs=[Fraction(1)],
            objective={0: Fraction(1)},
        )
        assert maximize(lp, [0, 0, 1]).value == Fraction(1, 3)

    def test_infeasible_start(self, simplex_lp):
        with pytest.raises(InfeasibleError):
            maximize(simplex_lp, [1, 1, 0])

    def test_unbounded(self):
        lp = LinearProgram(n_vars=2, rows=[{0: 1, 1: -1}], rhs=[Fraction(0)], objective={0: Fraction(1)})
        with pytest.raises(UnboundedError):
            maximize(lp, [0, 0])


class TestLinearProgram:
    """Program bookkeeping."""

    def test_row_count_mismatch(self):
        with pytest.raises(SolverError):
            LinearProgram(n_vars=1, rows=[{0: 1}], rhs=[])

    def test_residuals_and_value(self, simplex_lp):
        x = [Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)]
        assert simplex_lp.residuals(x) == [0]
        assert simplex_lp.value(x) == 1
