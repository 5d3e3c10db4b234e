"""Tests for balancing probabilities, sweeps and the handicap search."""

import pytest

from mnrule.balance import (
    BalanceResult,
    SweepRow,
    balancing_curve,
    balancing_probability,
    compare_models,
    default_q_grid,
    half_crossing,
    handicap_search,
    sweep_q,
    win_gap,
)
from mnrule.chain_solver import solve_round_model
from mnrule.rules import BracketError, InvalidRuleParams, RuleParams


class TestBalancingProbability:
    """Tests for q* found by bisection."""

    @pytest.mark.parametrize(
        "m,n,expected",
        [(5, 4, 0.60), (4, 3, 0.56), (2, 1, 0.34)],
    )
    def test_balancing_table(self, m, n, expected):
        result = balancing_probability(m, n, 0.75)
        assert isinstance(result, BalanceResult)
        assert result.q_star == pytest.approx(expected, abs=0.005)
        assert abs(result.residual) <= 1e-10
        assert result.iterations > 0

    def test_3_2_balances_below_one_half(self):
        """The (3, 2) rule balances at q* = 0.494377, which rounds to 0.49."""
        result = balancing_probability(3, 2, 0.75)
        assert result.q_star == pytest.approx(0.49438, abs=1e-4)
        assert round(result.q_star, 2) == 0.49
        solution = solve_round_model(RuleParams(3, 2, 0.75, result.q_star))
        assert solution.p_a_win == pytest.approx(0.5, abs=1e-9)

    def test_equalizes_win_probabilities(self):
        result = balancing_probability(5, 4, 0.75)
        solution = solve_round_model(RuleParams(5, 4, 0.75, result.q_star))
        assert solution.p_a_win == pytest.approx(solution.p_b_win, abs=1e-9)

    def test_2_1_needs_weaker_b(self):
        """Under (2, 1) B balances the shootout with a lower success rate than A."""
        p_grid = [0.2, 0.35, 0.5, 0.65, 0.8, 0.9]
        for result in balancing_curve(2, 1, p_grid):
            assert result.q_star < result.p

    def test_curve_keeps_grid_order(self):
        curve = balancing_curve(3, 2, [0.5, 0.75])
        assert [result.p for result in curve] == [0.5, 0.75]
        assert curve[0].q_star < curve[1].q_star

    def test_invalid_targets(self):
        with pytest.raises(InvalidRuleParams):
            balancing_probability(1, 1, 0.75)

    def test_no_sign_change(self, mocker):
        mocker.patch("mnrule.balance.win_gap", return_value=0.2)
        with pytest.raises(BracketError, match="does not change sign"):
            balancing_probability(5, 4, 0.75)

    def test_residual_too_large(self, mocker):
        mocker.patch("mnrule.balance.win_gap", side_effect=lambda m, n, p, q: 1.0 if q < 0.5 else -1.0)
        with pytest.raises(BracketError, match="residual"):
            balancing_probability(5, 4, 0.75)


class TestWinGap:
    def test_decreasing_in_q(self):
        gaps = [win_gap(4, 3, 0.75, q) for q in (0.2, 0.4, 0.6, 0.8)]
        assert gaps == sorted(gaps, reverse=True)


class TestSweep:
    """Tests for q sweeps."""

    def test_default_grid(self):
        grid = default_q_grid()
        assert len(grid) == 101
        assert grid[0] == pytest.approx(0.005)
        assert grid[-1] == pytest.approx(0.995)

    def test_grid_size_must_be_at_least_two(self):
        with pytest.raises(InvalidRuleParams, match="grid size"):
            default_q_grid(1)

    def test_rows_follow_grid(self):
        rows = sweep_q(2, 1, 0.75, [0.25, 0.75])
        assert [row.q for row in rows] == [0.25, 0.75]
        assert all(isinstance(row, SweepRow) for row in rows)

    def test_2_1_expected_rounds_at_equal_skill(self):
        (row,) = sweep_q(2, 1, 0.75, [0.75])
        assert row.er == pytest.approx(1.6, abs=1e-12)
        assert row.p_a == pytest.approx(0.1, abs=1e-12)

    def test_2_1_balance_point_on_default_grid(self):
        rows = sweep_q(2, 1, 0.75, default_q_grid())
        nearest = min(rows, key=lambda row: abs(row.q - 0.34))
        assert abs(nearest.p_a - 0.5) <= 0.01
        assert nearest.p_a + nearest.p_b == pytest.approx(1.0, abs=1e-12)

    def test_2_1_rounds_approach_one(self):
        rows = sweep_q(2, 1, 0.75, default_q_grid())
        assert rows[-1].er < 1.05

    def test_5_4_monotone(self):
        rows = sweep_q(5, 4, 0.75, default_q_grid(21))
        p_a = [row.p_a for row in rows]
        assert all(later < earlier for earlier, later in zip(p_a, p_a[1:]))

    def test_rejects_grid_values_outside_unit_interval(self):
        with pytest.raises(InvalidRuleParams, match="grid value q"):
            sweep_q(2, 1, 0.75, [0.5, 1.0])


class TestCompareModels:
    """Tests for the round versus sequential comparison."""

    def test_half_crossing_interpolates(self):
        assert half_crossing([0.0, 1.0], [1.0, 0.0]) == pytest.approx(0.5)
        assert half_crossing([0.0, 0.5, 1.0], [0.9, 0.7, 0.6]) is None

    def test_5_4_crossings(self):
        comparison = compare_models(sweep_q(5, 4, 0.75, default_q_grid()))
        assert comparison.p_a_crossing == pytest.approx(0.60, abs=0.01)
        # The sequential model favors A, so its curve crosses later.
        assert comparison.p_a_crossing < comparison.q_a_crossing < comparison.p_a_crossing + 0.08
        assert comparison.max_win_gap > 0.0
        assert comparison.max_rounds_gap > 0.0


class TestHandicapSearch:
    """Tests for the (m, n) handicap ranking."""

    def test_5_4_fairest_at_0_6(self):
        ranking = handicap_search(0.75, 0.6, 6)
        five_four = next(candidate for candidate in ranking if (candidate.m, candidate.n) == (5, 4))
        assert five_four.fairness_gap == ranking[0].fairness_gap

    def test_2_1_fair_at_0_34(self):
        ranking = handicap_search(0.75, 0.34, 3)
        two_one = next(candidate for candidate in ranking if (candidate.m, candidate.n) == (2, 1))
        assert two_one.fairness_gap <= 0.01

    def test_every_pair_ranked(self):
        ranking = handicap_search(0.6, 0.5, 6)
        assert len(ranking) == 15
        gaps = [candidate.fairness_gap for candidate in ranking]
        assert gaps == sorted(gaps)
        assert all(1 <= candidate.n < candidate.m <= 6 for candidate in ranking)

    def test_m_max_too_small(self):
        with pytest.raises(InvalidRuleParams, match="m_max"):
            handicap_search(0.75, 0.6, 1)
