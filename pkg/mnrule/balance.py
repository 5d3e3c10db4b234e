"""Balancing probabilities, q sweeps and the (m, n) handicap search."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence

import numpy as np
from scipy.optimize import bisect

from mnrule.chain_solver import solve_round_model, solve_sequential_model
from mnrule.rules import BracketError, InvalidRuleParams, RuleParams, check_probability

logger = logging.getLogger(__name__)

BRACKET = (1e-9, 1 - 1e-9)
Q_TOLERANCE = 1e-10
RESIDUAL_TOLERANCE = 1e-10
DEFAULT_GRID_SIZE = 101
GRID_LIMITS = (0.005, 0.995)


@dataclass(frozen=True)
class SweepRow:
    q: float
    p_a: float
    p_b: float
    er: float
    q_a_sequential: float
    er_sequential: float


@dataclass(frozen=True)
class BalanceResult:
    m: int
    n: int
    p: float
    q_star: float
    residual: float
    iterations: int


@dataclass(frozen=True)
class HandicapCandidate:
    m: int
    n: int
    p_a: float

    @property
    def fairness_gap(self) -> float:
        return abs(self.p_a - 0.5)


def win_gap(m: int, n: int, p: float, q: float) -> float:
    """P_A - P_B for the round model; strictly decreasing in q."""
    solution = solve_round_model(RuleParams(m, n, p, q))
    return solution.p_a_win - solution.p_b_win


def balancing_probability(
    m: int, n: int, p: float, tol: float = RESIDUAL_TOLERANCE, q_tol: float = Q_TOLERANCE
) -> BalanceResult:
    """The q that equalizes both teams' win probabilities, found by bisection on P_A - P_B."""
    RuleParams(m, n, p, 0.5)  # validates m, n and p
    lo, hi = BRACKET
    f_lo, f_hi = win_gap(m, n, p, lo), win_gap(m, n, p, hi)
    if not (f_lo > 0 > f_hi):
        raise BracketError(
            f"P_A - P_B does not change sign on [{lo}, {hi}] for (m, n, p) = ({m}, {n}, {p}): "
            f"f(lo) = {f_lo:.3e}, f(hi) = {f_hi:.3e}"
        )

    # Bisect well past q_tol; the residual check below is the contract.
    q_star, info = bisect(lambda q: win_gap(m, n, p, q), lo, hi, xtol=min(q_tol, 1e-14), full_output=True)
    residual = win_gap(m, n, p, q_star)
    logger.debug("q*(%s) for (%d, %d) = %.12f after %d iterations", p, m, n, q_star, info.iterations)
    if abs(residual) > tol:
        raise BracketError(f"bisection stopped at q = {q_star!r} with residual {residual:.3e} > {tol:.1e}")
    return BalanceResult(m=m, n=n, p=p, q_star=q_star, residual=residual, iterations=info.iterations)


def balancing_curve(m: int, n: int, p_grid: Iterable[float], tol: float = RESIDUAL_TOLERANCE) -> List[BalanceResult]:
    """q*(p) for every p in the grid."""
    return [balancing_probability(m, n, p, tol) for p in p_grid]


def default_q_grid(size: int = DEFAULT_GRID_SIZE) -> np.ndarray:
    if size < 2:
        raise InvalidRuleParams(f"grid size must be at least 2, got {size}")
    return np.linspace(*GRID_LIMITS, size)


def sweep_q(m: int, n: int, p: float, q_grid: Sequence[float]) -> List[SweepRow]:
    """Round-model and sequential-model quantities at every q in the grid, in grid order."""
    rows = []
    for q in q_grid:
        params = RuleParams(m, n, p, check_probability(q, "grid value q"))
        rounds = solve_round_model(params)
        sequential = solve_sequential_model(params)
        rows.append(
            SweepRow(
                q=params.q,
                p_a=rounds.p_a_win,
                p_b=rounds.p_b_win,
                er=rounds.expected_rounds,
                q_a_sequential=sequential.q_a_win,
                er_sequential=sequential.expected_rounds,
            )
        )
    return rows


@dataclass(frozen=True)
class SweepComparison:
    """How far the sequential curves sit from the round-model curves over one sweep."""

    max_win_gap: float
    max_rounds_gap: float
    p_a_crossing: Optional[float]
    q_a_crossing: Optional[float]


def half_crossing(qs: Sequence[float], values: Sequence[float]) -> Optional[float]:
    """First q at which ``values`` falls through 0.5, linearly interpolated between grid points."""
    for (q0, v0), (q1, v1) in zip(zip(qs, values), zip(qs[1:], values[1:])):
        if v0 >= 0.5 >= v1 and v0 != v1:
            return q0 + (v0 - 0.5) * (q1 - q0) / (v0 - v1)
    return None


def compare_models(rows: Sequence[SweepRow]) -> SweepComparison:
    qs = [row.q for row in rows]
    return SweepComparison(
        max_win_gap=max(abs(row.q_a_sequential - row.p_a) for row in rows),
        max_rounds_gap=max(abs(row.er_sequential - row.er) for row in rows),
        p_a_crossing=half_crossing(qs, [row.p_a for row in rows]),
        q_a_crossing=half_crossing(qs, [row.q_a_sequential for row in rows]),
    )


def handicap_search(p: float, q: float, m_max: int) -> List[HandicapCandidate]:
    """Every target pair 1 <= n < m <= m_max, fairest first.

    Ties on the fairness gap keep (m, n) order.
    """
    if m_max < 2:
        raise InvalidRuleParams(f"m_max must be at least 2, got {m_max}")
    check_probability(p, "p")
    check_probability(q, "q")
    candidates = [
        HandicapCandidate(m, n, solve_round_model(RuleParams(m, n, p, q)).p_a_win)
        for m in range(2, m_max + 1)
        for n in range(1, m)
    ]
    return sorted(candidates, key=lambda candidate: candidate.fairness_gap)
