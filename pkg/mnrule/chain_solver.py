"""Exact solvers for the (m, n) shootout.

The round-based model is a finite absorbing chain over scores (a, b) with
a < m and b < n. The self-loop (both teams miss) is folded in closed form, so
each transient state is solved once in reverse score order. Sudden death is
handled analytically.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Hashable, Tuple

import numpy as np

from mnrule.rules import ConvergenceError, RuleParams, ShootoutModel, check_probability

logger = logging.getLogger(__name__)

AUDIT_TOLERANCE = 1e-12
AUDIT_ITERATION_CAP = 1_000_000
DEVIATION_THRESHOLD = 1e-9


@dataclass(frozen=True)
class ExactSolution:
    """Round-based solution.

    ``state_values`` maps every score (a, b) with a <= m, b <= n to A's win
    probability and the expected number of remaining rounds from that score.
    """

    params: RuleParams
    p_a_win: float
    p_b_win: float
    expected_rounds: float
    p_sudden_death: float
    state_values: Dict[Tuple[int, int], Tuple[float, float]]


@dataclass(frozen=True)
class SequentialSolution:
    """Alternating-kick solution.

    ``expected_rounds`` is expected_kicks / 2; ``expected_round_pairs`` counts
    rounds started, i.e. the expected number of kicks taken by A.
    """

    params: RuleParams
    q_a_win: float
    q_b_win: float
    expected_kicks: float
    expected_rounds: float
    expected_round_pairs: float


@dataclass(frozen=True)
class Deviation:
    state: str
    team: str
    honest_value: float
    deviation_value: float


@dataclass(frozen=True)
class DeviationReport:
    params: RuleParams
    model: ShootoutModel
    profitable_deviations: Tuple[Deviation, ...]
    game_value: float
    honest_value: float
    iterations: int

    @property
    def is_strategyproof(self) -> bool:
        return not self.profitable_deviations


def sudden_death_win_prob(p: float, q: float) -> float:
    """A's probability of winning sudden death: p(1-q) / (p + q - 2pq)."""
    p = check_probability(p, "p")
    q = check_probability(q, "q")
    return p * (1 - q) / (p + q - 2 * p * q)


def sudden_death_expected_rounds(p: float, q: float) -> float:
    """Expected number of sudden-death rounds: 1 / (p + q - 2pq)."""
    p = check_probability(p, "p")
    q = check_probability(q, "q")
    return 1.0 / (p + q - 2 * p * q)


def closed_form_21_win(p: float, q: float) -> float:
    """A's win probability under (2, 1): p^2(1-q)^2 / ((p+q-2pq)(p+q-pq))."""
    p = check_probability(p, "p")
    q = check_probability(q, "q")
    return p * p * (1 - q) ** 2 / ((p + q - 2 * p * q) * (p + q - p * q))


def closed_form_21_er(p: float, q: float) -> float:
    """Expected rounds under (2, 1): (2p+q-3pq) / ((p+q-2pq)(p+q-pq))."""
    p = check_probability(p, "p")
    q = check_probability(q, "q")
    return (2 * p + q - 3 * p * q) / ((p + q - 2 * p * q) * (p + q - p * q))


def closed_form_21_states(p: float, q: float) -> Dict[str, float]:
    """Every named value of the (2, 1) chain, keyed by the chain's state labels."""
    p = check_probability(p, "p")
    q = check_probability(q, "q")
    decisive = p + q - 2 * p * q
    return {
        "P(A:1,0)": p * (1 - q) / decisive,
        "P(B:1,0)": p * (1 - q) ** 2 / decisive,
        "P(A:0,0)": closed_form_21_win(p, q),
        "ER(SD)": 1.0 / decisive,
        "ER(A:1,0)": 1.0 / decisive,
        "ER(A:0,0)": closed_form_21_er(p, q),
    }


def solve_round_model(params: RuleParams) -> ExactSolution:
    """Solve the round-based chain exactly."""
    m, n, p, q = params.m, params.n, params.p, params.q
    sd_win = sudden_death_win_prob(p, q)
    sd_rounds = sudden_death_expected_rounds(p, q)

    # Tables are indexed [a, b]; row m and column n hold the absorbing scores.
    a_win = np.zeros((m + 1, n + 1))
    b_win = np.zeros((m + 1, n + 1))
    rounds = np.zeros((m + 1, n + 1))
    sd_mass = np.zeros((m + 1, n + 1))

    a_win[m, :n] = 1.0
    b_win[:m, n] = 1.0
    a_win[m, n] = sd_win
    b_win[m, n] = q * (1 - p) / params.decision_rate
    rounds[m, n] = sd_rounds
    sd_mass[m, n] = 1.0

    a_only = p * (1 - q)
    both = p * q
    b_only = (1 - p) * q
    decisive = 1.0 - (1 - p) * (1 - q)

    for a in range(m - 1, -1, -1):
        for b in range(n - 1, -1, -1):
            for table in (a_win, b_win, sd_mass):
                table[a, b] = (
                    a_only * table[a + 1, b] + both * table[a + 1, b + 1] + b_only * table[a, b + 1]
                ) / decisive
            rounds[a, b] = (
                1.0 + a_only * rounds[a + 1, b] + both * rounds[a + 1, b + 1] + b_only * rounds[a, b + 1]
            ) / decisive

    state_values = {
        (a, b): (float(a_win[a, b]), float(rounds[a, b])) for a in range(m + 1) for b in range(n + 1)
    }
    return ExactSolution(
        params=params,
        p_a_win=float(a_win[0, 0]),
        p_b_win=float(b_win[0, 0]),
        expected_rounds=float(rounds[0, 0]),
        p_sudden_death=float(sd_mass[0, 0]),
        state_values=state_values,
    )


def solve_sequential_model(params: RuleParams) -> SequentialSolution:
    """Solve the alternating-kick model, where the first team to reach its target wins.

    From score (a, b) with A to kick, the pair of misses returns to the same
    state, so that two-state cycle is folded in closed form like the round model's
    self-loop.
    """
    m, n, p, q = params.m, params.n, params.p, params.q
    decisive = 1.0 - (1 - p) * (1 - q)

    # [a, b] tables for "A to kick" and "B to kick"
    a_turn = {name: np.zeros((m, n)) for name in ("a_win", "b_win", "kicks", "a_kicks")}
    b_turn = {name: np.zeros((m, n)) for name in ("a_win", "b_win", "kicks", "a_kicks")}

    # Value reached when A scores (B to kick next, or A wins) and when B scores.
    a_scores_terminal = {"a_win": 1.0, "b_win": 0.0, "kicks": 0.0, "a_kicks": 0.0}
    b_scores_terminal = {"a_win": 0.0, "b_win": 1.0, "kicks": 0.0, "a_kicks": 0.0}

    for a in range(m - 1, -1, -1):
        for b in range(n - 1, -1, -1):
            for name in a_turn:
                after_a_scores = a_scores_terminal[name] if a + 1 == m else b_turn[name][a + 1, b]
                after_b_scores = b_scores_terminal[name] if b + 1 == n else a_turn[name][a, b + 1]
                # Kicks taken on the way back to (a, b) with A to kick: A's kick always,
                # B's kick when A missed.
                cost_a = 1.0 if name in ("kicks", "a_kicks") else 0.0
                cost_b = 1.0 if name == "kicks" else 0.0
                a_turn[name][a, b] = (
                    cost_a + (1 - p) * cost_b + p * after_a_scores + (1 - p) * q * after_b_scores
                ) / decisive
                b_turn[name][a, b] = cost_b + q * after_b_scores + (1 - q) * a_turn[name][a, b]

    kicks = float(a_turn["kicks"][0, 0])
    return SequentialSolution(
        params=params,
        q_a_win=float(a_turn["a_win"][0, 0]),
        q_b_win=float(a_turn["b_win"][0, 0]),
        expected_kicks=kicks,
        expected_rounds=kicks / 2.0,
        expected_round_pairs=float(a_turn["a_kicks"][0, 0]),
    )


def sequential_advantage(params: RuleParams) -> float:
    """Q(A) - P_A.

    The models differ only when both teams reach their targets in the same
    round: the sequential model hands those shootouts to A, the round model
    sends them to sudden death.
    """
    solution = solve_round_model(params)
    return solution.p_sudden_death * (1.0 - sudden_death_win_prob(params.p, params.q))


def _round_model_game(params: RuleParams):
    """Kick nodes of the round model: node -> (kicker, honest probability, on score, on miss)."""
    m, n = params.m, params.n

    def end_of_round(a, b):
        if a == m and b == n:
            return "SD:A"
        if a == m:
            return "A wins"
        if b == n:
            return "B wins"
        return f"A:({a},{b})"

    nodes = {}
    for a in range(m + 1):
        for b in range(n):
            if a < m:
                nodes[f"A:({a},{b})"] = ("A", params.p, f"B:({a + 1},{b})", f"B:({a},{b})")
            nodes[f"B:({a},{b})"] = ("B", params.q, end_of_round(a, b + 1), end_of_round(a, b))
    nodes["SD:A"] = ("A", params.p, "SD:B after A scored", "SD:B after A missed")
    nodes["SD:B after A scored"] = ("B", params.q, "SD:A", "A wins")
    nodes["SD:B after A missed"] = ("B", params.q, "B wins", "SD:A")
    return nodes


def _sequential_game(params: RuleParams):
    m, n = params.m, params.n
    nodes = {}
    for a in range(m):
        for b in range(n):
            on_a_score = "A wins" if a + 1 == m else f"B:({a + 1},{b})"
            on_b_score = "B wins" if b + 1 == n else f"A:({a},{b + 1})"
            nodes[f"A:({a},{b})"] = ("A", params.p, on_a_score, f"B:({a},{b})")
            nodes[f"B:({a},{b})"] = ("B", params.q, on_b_score, f"A:({a},{b})")
    return nodes


def _solve_game(nodes, tolerance: float, iteration_cap: int) -> Tuple[Dict[Hashable, float], int]:
    """Value iteration for the zero-sum game: A maximizes, B minimizes A's win probability.

    Each kicker picks its success probability from {honest, 0}.
    """
    values = {name: 0.0 for name in nodes}
    values["A wins"] = 1.0
    values["B wins"] = 0.0

    for iteration in range(1, iteration_cap + 1):
        delta = 0.0
        for name, (kicker, honest, on_score, on_miss) in nodes.items():
            honest_value = honest * values[on_score] + (1 - honest) * values[on_miss]
            miss_value = values[on_miss]
            new_value = max(honest_value, miss_value) if kicker == "A" else min(honest_value, miss_value)
            delta = max(delta, abs(new_value - values[name]))
            values[name] = new_value
        if delta < tolerance:
            return values, iteration
    raise ConvergenceError(f"value iteration did not converge within {iteration_cap} sweeps (last delta {delta:.3e})")


def strategyproofness_audit(
    params: RuleParams,
    model: ShootoutModel = ShootoutModel.ROUND_BASED,
    tolerance: float = AUDIT_TOLERANCE,
    iteration_cap: int = AUDIT_ITERATION_CAP,
) -> DeviationReport:
    """Check that no team gains by deliberately missing a kick.

    Solves the game in which every kicker may miss on purpose, then reports
    each kick where missing beats kicking honestly by more than
    DEVIATION_THRESHOLD, in the kicker's own win probability.
    """
    if model is ShootoutModel.SEQUENTIAL:
        nodes = _sequential_game(params)
        honest = solve_sequential_model(params).q_a_win
    else:
        nodes = _round_model_game(params)
        honest = solve_round_model(params).p_a_win

    # Successors first, so most updates in a sweep see fresh values.
    ordered = dict(sorted(nodes.items(), key=lambda item: -_score_total(item[0])))
    values, iterations = _solve_game(ordered, tolerance, iteration_cap)
    logger.debug("audit of %s (%s) converged after %d sweeps", params, model.value, iterations)

    deviations = []
    for name, (kicker, prob, on_score, on_miss) in ordered.items():
        honest_value = prob * values[on_score] + (1 - prob) * values[on_miss]
        miss_value = values[on_miss]
        if kicker == "B":
            honest_value, miss_value = 1.0 - honest_value, 1.0 - miss_value
        if miss_value > honest_value + DEVIATION_THRESHOLD:
            deviations.append(Deviation(name, kicker, honest_value, miss_value))

    return DeviationReport(
        params=params,
        model=model,
        profitable_deviations=tuple(deviations),
        game_value=values["A:(0,0)"],
        honest_value=honest,
        iterations=iterations,
    )


def _score_total(name: str) -> int:
    if "(" not in name:
        return 1_000_000
    a, b = name[name.index("(") + 1 : name.index(")")].split(",")
    return int(a) + int(b)
