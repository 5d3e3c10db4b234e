"""Tests for the exact chain solvers and the strategyproofness audit."""

import itertools

import pytest

from mnrule.chain_solver import (
    closed_form_21_er,
    closed_form_21_states,
    closed_form_21_win,
    sequential_advantage,
    solve_round_model,
    solve_sequential_model,
    strategyproofness_audit,
    sudden_death_expected_rounds,
    sudden_death_win_prob,
)
from mnrule.rules import ConvergenceError, InvalidRuleParams, RuleParams, ShootoutModel

GRID = [round(0.1 * i, 1) for i in range(1, 10)]
TARGETS = [(2, 1), (3, 2), (4, 3), (5, 4)]


def enumerate_round_model(params, horizon):
    """Sum kick-sequence probabilities up to ``horizon`` rounds.

    Returns (A's certain win mass, B's certain win mass, mass still in regulation).
    Sudden-death entries are credited with the sudden-death win probability.
    """
    sd_win = sudden_death_win_prob(params.p, params.q)
    outcomes = [(a, b) for a in (True, False) for b in (True, False)]
    a_mass = b_mass = running = 0.0
    for sequence in itertools.product(outcomes, repeat=horizon):
        prob = 1.0
        for a_scored, b_scored in sequence:
            prob *= (params.p if a_scored else 1 - params.p) * (params.q if b_scored else 1 - params.q)
        a = b = 0
        for a_scored, b_scored in sequence:
            a += a_scored
            b += b_scored
            if a == params.m or b == params.n:
                break
        if a == params.m and b == params.n:
            a_mass += prob * sd_win
            b_mass += prob * (1 - sd_win)
        elif a == params.m:
            a_mass += prob
        elif b == params.n:
            b_mass += prob
        else:
            running += prob
    return a_mass, b_mass, running


def enumerate_sequential_model(params, kicks):
    """Same as enumerate_round_model for alternating kicks, ``kicks`` kicks deep."""
    a_mass = b_mass = running = 0.0
    for sequence in itertools.product((True, False), repeat=kicks):
        prob = 1.0
        a = b = 0
        winner = None
        for index, scored in enumerate(sequence):
            success = params.p if index % 2 == 0 else params.q
            prob *= success if scored else 1 - success
            if winner is not None:
                continue
            if index % 2 == 0:
                a += scored
                winner = "A" if a == params.m else None
            else:
                b += scored
                winner = "B" if b == params.n else None
        if winner == "A":
            a_mass += prob
        elif winner == "B":
            b_mass += prob
        else:
            running += prob
    return a_mass, b_mass, running


class TestSuddenDeath:
    """Tests for the analytic sudden-death values."""

    def test_win_probability(self):
        assert sudden_death_win_prob(0.75, 0.6) == pytest.approx(2 / 3, abs=1e-12)

    def test_equal_kickers_split_evenly(self):
        assert sudden_death_win_prob(0.75, 0.75) == pytest.approx(0.5, abs=1e-12)

    def test_expected_rounds(self):
        assert sudden_death_expected_rounds(0.75, 0.75) == pytest.approx(8 / 3, abs=1e-12)
        assert sudden_death_expected_rounds(0.75, 0.6) == pytest.approx(1 / 0.45, abs=1e-12)

    def test_matches_geometric_sum(self):
        p, q = 0.75, 0.6
        tie = p * q + (1 - p) * (1 - q)
        win = sum(tie**k * p * (1 - q) for k in range(2000))
        rounds = sum((k + 1) * tie**k * (p + q - 2 * p * q) for k in range(2000))
        assert sudden_death_win_prob(p, q) == pytest.approx(win, abs=1e-12)
        assert sudden_death_expected_rounds(p, q) == pytest.approx(rounds, abs=1e-12)

    def test_rejects_degenerate_probabilities(self):
        with pytest.raises(InvalidRuleParams):
            sudden_death_win_prob(1.0, 0.0)


class TestClosedForm21:
    """Tests for the (2, 1) closed forms."""

    def test_win_probability(self):
        assert closed_form_21_win(0.75, 0.75) == pytest.approx(0.1, abs=1e-12)

    def test_near_balance(self):
        assert closed_form_21_win(0.75, 0.34) == pytest.approx(0.506, abs=0.001)

    def test_expected_rounds(self):
        assert closed_form_21_er(0.75, 0.75) == pytest.approx(1.6, abs=1e-12)
        assert closed_form_21_er(0.75, 0.6) == pytest.approx(1.85, abs=0.005)

    def test_states_match_round_model(self):
        states = closed_form_21_states(0.75, 0.6)
        solution = solve_round_model(RuleParams(2, 1, 0.75, 0.6))
        assert states["P(A:1,0)"] == pytest.approx(solution.state_values[(1, 0)][0], abs=1e-12)
        assert states["ER(A:1,0)"] == pytest.approx(solution.state_values[(1, 0)][1], abs=1e-12)
        assert states["P(B:1,0)"] == pytest.approx(0.4 * states["P(A:1,0)"], abs=1e-12)
        assert states["P(A:0,0)"] == pytest.approx(solution.p_a_win, abs=1e-12)
        assert states["ER(SD)"] == pytest.approx(solution.state_values[(2, 1)][1], abs=1e-12)

    @pytest.mark.parametrize("p,q", list(itertools.product(GRID, GRID)))
    def test_round_model_agrees_on_grid(self, p, q):
        solution = solve_round_model(RuleParams(2, 1, p, q))
        assert solution.p_a_win == pytest.approx(closed_form_21_win(p, q), abs=1e-12)
        assert solution.expected_rounds == pytest.approx(closed_form_21_er(p, q), abs=1e-12)


class TestSolveRoundModel:
    """Tests for the round-based chain."""

    def test_2_1_example(self):
        solution = solve_round_model(RuleParams(2, 1, 0.75, 0.75))
        assert solution.p_a_win == pytest.approx(0.1, abs=1e-12)
        assert solution.expected_rounds == pytest.approx(1.6, abs=1e-12)

    def test_5_4_example(self):
        solution = solve_round_model(RuleParams(5, 4, 0.75, 0.6))
        assert solution.p_a_win == pytest.approx(0.5, abs=0.01)
        assert solution.expected_rounds == pytest.approx(6.06, abs=0.01)

    @pytest.mark.parametrize("m,n", TARGETS + [(6, 3), (4, 1)])
    @pytest.mark.parametrize("p,q", [(0.1, 0.9), (0.5, 0.5), (0.75, 0.6), (0.9, 0.3)])
    def test_normalization(self, m, n, p, q):
        solution = solve_round_model(RuleParams(m, n, p, q))
        assert solution.p_a_win + solution.p_b_win == pytest.approx(1.0, abs=1e-12)
        assert 0.0 <= solution.p_sudden_death <= 1.0

    @pytest.mark.parametrize("m,n", TARGETS)
    def test_monotone_in_p_and_q(self, m, n):
        for q in GRID:
            values = [solve_round_model(RuleParams(m, n, p, q)).p_a_win for p in GRID]
            assert all(lo < hi for lo, hi in zip(values, values[1:]))
        for p in GRID:
            values = [solve_round_model(RuleParams(m, n, p, q)).p_a_win for q in GRID]
            assert all(lo > hi for lo, hi in zip(values, values[1:]))

    @pytest.mark.parametrize("m,n", TARGETS)
    @pytest.mark.parametrize("p,q", [(0.3, 0.7), (0.75, 0.6), (0.9, 0.1)])
    def test_dominance(self, m, n, p, q):
        """A harder target for A lowers A's chances; a harder target for B raises them."""
        base = solve_round_model(RuleParams(m, n, p, q)).p_a_win
        assert solve_round_model(RuleParams(m + 1, n, p, q)).p_a_win <= base
        if n + 1 < m:
            assert solve_round_model(RuleParams(m, n + 1, p, q)).p_a_win >= base

    @pytest.mark.parametrize(
        "params,horizon",
        [
            (RuleParams(2, 1, 0.75, 0.75), 8),
            (RuleParams(2, 1, 0.3, 0.8), 8),
            (RuleParams(3, 2, 0.75, 0.6), 7),
            (RuleParams(3, 2, 0.5, 0.5), 7),
        ],
    )
    def test_bracketed_by_enumeration(self, params, horizon):
        a_mass, b_mass, running = enumerate_round_model(params, horizon)
        solution = solve_round_model(params)
        assert a_mass - 1e-12 <= solution.p_a_win <= a_mass + running + 1e-12
        assert b_mass - 1e-12 <= solution.p_b_win <= b_mass + running + 1e-12

    @pytest.mark.parametrize("m,n,p,q", [(2, 1, 0.75, 0.75), (5, 4, 0.75, 0.6), (4, 2, 0.3, 0.9)])
    def test_tie_state_is_sudden_death(self, m, n, p, q):
        solution = solve_round_model(RuleParams(m, n, p, q))
        assert solution.state_values[(m, n)][0] == sudden_death_win_prob(p, q)
        assert solution.state_values[(m, n)][1] == sudden_death_expected_rounds(p, q)

    def test_state_values_cover_every_score(self):
        solution = solve_round_model(RuleParams(3, 2, 0.6, 0.6))
        assert set(solution.state_values) == {(a, b) for a in range(4) for b in range(3)}
        assert solution.state_values[(3, 0)] == (1.0, 0.0)
        assert solution.state_values[(0, 2)] == (0.0, 0.0)


class TestSolveSequentialModel:
    """Tests for the alternating-kick model."""

    @pytest.mark.parametrize("m,n", TARGETS + [(6, 3)])
    @pytest.mark.parametrize("p,q", [(0.1, 0.9), (0.5, 0.5), (0.75, 0.6), (0.9, 0.2)])
    def test_normalization(self, m, n, p, q):
        solution = solve_sequential_model(RuleParams(m, n, p, q))
        assert solution.q_a_win + solution.q_b_win == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("m,n", TARGETS)
    @pytest.mark.parametrize("p,q", [(0.3, 0.7), (0.75, 0.6), (0.9, 0.1)])
    def test_differs_from_round_model_by_sudden_death_mass(self, m, n, p, q):
        params = RuleParams(m, n, p, q)
        gap = solve_sequential_model(params).q_a_win - solve_round_model(params).p_a_win
        assert gap == pytest.approx(sequential_advantage(params), abs=1e-12)
        assert gap >= 0.0

    @pytest.mark.parametrize(
        "params,kicks",
        [
            (RuleParams(2, 1, 0.75, 0.999), 14),
            (RuleParams(2, 1, 0.5, 0.5), 16),
            (RuleParams(3, 2, 0.75, 0.6), 16),
        ],
    )
    def test_bracketed_by_enumeration(self, params, kicks):
        a_mass, b_mass, running = enumerate_sequential_model(params, kicks)
        solution = solve_sequential_model(params)
        assert a_mass - 1e-12 <= solution.q_a_win <= a_mass + running + 1e-12
        assert b_mass - 1e-12 <= solution.q_b_win <= b_mass + running + 1e-12

    def test_near_certain_b_wins_2_1(self):
        """With q near 1, B's first kick almost always decides it."""
        solution = solve_sequential_model(RuleParams(2, 1, 0.75, 0.999))
        assert solution.q_a_win < 0.001

    def test_round_units(self):
        solution = solve_sequential_model(RuleParams(5, 4, 0.75, 0.6))
        assert solution.expected_rounds == pytest.approx(solution.expected_kicks / 2, abs=1e-12)
        assert solution.expected_rounds <= solution.expected_round_pairs <= solution.expected_rounds + 0.5

    def test_2_1_expected_kicks_by_hand(self):
        """(2, 1) at p = q = 0.5 solved by hand from the two-state cycles."""
        # From A:(1,0): A scores (1 kick, A wins) or misses and B kicks (2 kicks, B wins on a goal).
        # E1 = 1 + 0.5 * (1 + 0.5 * E1)  =>  E1 = 2
        # From A:(0,0): A kicks; on a goal move to B:(1,0), else B kicks from (0,0).
        # E_B1 = 1 + 0.5 * E1 = 2;  E0 = 1 + 0.5 * E_B1 + 0.5 * (1 + 0.5 * E0)  =>  E0 = 10 / 3
        solution = solve_sequential_model(RuleParams(2, 1, 0.5, 0.5))
        assert solution.expected_kicks == pytest.approx(10 / 3, abs=1e-12)


class TestStrategyproofnessAudit:
    """Tests for the deliberate-miss audit."""

    @pytest.mark.parametrize(
        "params",
        [
            RuleParams(5, 4, 0.75, 0.6),
            RuleParams(2, 1, 0.75, 0.75),
            RuleParams(3, 2, 0.9, 0.1),
        ],
    )
    @pytest.mark.parametrize("model", [ShootoutModel.ROUND_BASED, ShootoutModel.SEQUENTIAL])
    def test_no_profitable_deviations(self, params, model):
        report = strategyproofness_audit(params, model=model)
        assert report.is_strategyproof
        assert report.profitable_deviations == ()
        assert report.game_value == pytest.approx(report.honest_value, abs=1e-9)

    @pytest.mark.parametrize("m,n", TARGETS)
    @pytest.mark.parametrize("p,q", [(0.1, 0.1), (0.5, 0.9), (0.9, 0.5)])
    def test_grid_instances(self, m, n, p, q):
        assert strategyproofness_audit(RuleParams(m, n, p, q)).is_strategyproof

    def test_iteration_cap(self):
        with pytest.raises(ConvergenceError, match="did not converge"):
            strategyproofness_audit(RuleParams(5, 4, 0.1, 0.1), iteration_cap=1)
