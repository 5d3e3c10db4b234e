"""Round-indexed series for win probabilities and expected rounds.

Each series sums over the round r in which the shootout is decided (or enters
sudden death) and is truncated once a certified bound on the omitted mass
falls below the requested epsilon. Terms are evaluated with scipy's binomial
and negative-binomial distributions, which work in log space and do not
overflow near the round cap.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.stats import binom, nbinom

from mnrule.chain_solver import sudden_death_expected_rounds, sudden_death_win_prob
from mnrule.rules import InvalidRuleParams, RuleParams, SeriesTruncationError

logger = logging.getLogger(__name__)

DEFAULT_EPSILON = 1e-12
ROUND_CAP = 10_000


@dataclass(frozen=True)
class SeriesResult:
    value: float
    truncation_round: int
    tail_bound: float


def running_tail_bound(params: RuleParams, r: int) -> float:
    """Upper bound on the probability that regulation is still running after round r.

    A cannot have reached m goals, so the bound is P[Binomial(r, p) <= m - 1].
    """
    if r < 1:
        raise InvalidRuleParams(f"round must be positive, got {r}")
    return float(binom.cdf(params.m - 1, r, params.p))


def _expected_rounds_tail_bound(params: RuleParams, rounds: np.ndarray) -> np.ndarray:
    """Bound on sum_{r > R} of the expected-rounds terms, for each R in ``rounds``.

    The shootout ends no later than the round tau in which A reaches m, so the
    omitted contribution is at most E[tau; tau > R] + ER(SD) P(tau > R), and
    E[tau; tau > R] = (m / p) P[Binomial(R + 1, p) <= m].
    """
    m, p = params.m, params.p
    sd_rounds = sudden_death_expected_rounds(params.p, params.q)
    return (m / p) * binom.cdf(m, rounds + 1, p) + sd_rounds * binom.cdf(m - 1, rounds, p)


def _truncation_round(
    params: RuleParams, epsilon: float, bound: Callable[[RuleParams, np.ndarray], np.ndarray]
) -> tuple[int, float]:
    if not epsilon > 0:
        raise InvalidRuleParams(f"epsilon must be positive, got {epsilon!r}")
    rounds = np.arange(params.m, ROUND_CAP + 1)
    bounds = bound(params, rounds)
    below = np.flatnonzero(bounds < epsilon)
    if below.size == 0:
        raise SeriesTruncationError(
            f"tail bound {bounds[-1]:.3e} still exceeds epsilon {epsilon:.3e} at the round cap {ROUND_CAP}"
        )
    index = int(below[0])
    return int(rounds[index]), float(bounds[index])


def _regulation_bound(params: RuleParams, rounds: np.ndarray) -> np.ndarray:
    return binom.cdf(params.m - 1, rounds, params.p)


def _a_reaches_target(params: RuleParams, rounds: np.ndarray) -> np.ndarray:
    """P(A scores its m-th goal in round r): C(r-1, m-1) p^m (1-p)^(r-m)."""
    return nbinom.pmf(rounds - params.m, params.m, params.p)


def _b_reaches_target(params: RuleParams, rounds: np.ndarray) -> np.ndarray:
    return nbinom.pmf(rounds - params.n, params.n, params.q)


def pa_series(params: RuleParams, epsilon: float = DEFAULT_EPSILON) -> SeriesResult:
    """A's win probability, summed over the round in which A reaches m goals."""
    last, tail = _truncation_round(params, epsilon, _regulation_bound)
    rounds = np.arange(params.m, last + 1)
    sd_win = sudden_death_win_prob(params.p, params.q)

    b_short = binom.cdf(params.n - 1, rounds, params.q)
    terms = _a_reaches_target(params, rounds) * (b_short + _b_reaches_target(params, rounds) * sd_win)
    logger.debug("pa_series %s: %d terms, tail bound %.3e", params, rounds.size, tail)
    return SeriesResult(value=float(np.sum(terms)), truncation_round=last, tail_bound=tail)


def pb_series(params: RuleParams, epsilon: float = DEFAULT_EPSILON) -> SeriesResult:
    """B's win probability.

    Rounds n..m-1 are won by B outright whenever B reaches n, since A cannot
    have reached m yet; from round m on, A must also be short of m or lose the
    sudden death.
    """
    last, tail = _truncation_round(params, epsilon, _regulation_bound)
    early = np.arange(params.n, params.m)
    rounds = np.arange(params.m, last + 1)
    sd_loss = params.q * (1 - params.p) / params.decision_rate

    finite_part = np.sum(_b_reaches_target(params, early))
    a_short = binom.cdf(params.m - 1, rounds, params.p)
    terms = _b_reaches_target(params, rounds) * (a_short + _a_reaches_target(params, rounds) * sd_loss)
    logger.debug("pb_series %s: %d terms, tail bound %.3e", params, early.size + rounds.size, tail)
    return SeriesResult(value=float(finite_part + np.sum(terms)), truncation_round=last, tail_bound=tail)


def er_series(
    params: RuleParams, epsilon: float = DEFAULT_EPSILON, printed_upper_index: bool = False
) -> SeriesResult:
    """Expected number of rounds, sudden death included.

    The B-wins term needs A below m after r rounds, so its inner binomial sum
    runs to min(r, m - 1). ``printed_upper_index`` switches to the max(r, m - 1)
    reading, which counts rounds in which A had already reached m; it exists so
    that the two readings can be compared against the exact solver.
    """
    last, tail = _truncation_round(params, epsilon, _expected_rounds_tail_bound)
    m, n, p = params.m, params.n, params.p
    sd_rounds = sudden_death_expected_rounds(params.p, params.q)

    a_rounds = np.arange(m, last + 1)
    b_rounds = np.arange(n, last + 1)

    a_reach = _a_reaches_target(params, a_rounds)
    a_wins = a_rounds * a_reach * binom.cdf(n - 1, a_rounds, params.q)

    upper = np.maximum(b_rounds, m - 1) if printed_upper_index else np.minimum(b_rounds, m - 1)
    b_wins = b_rounds * _b_reaches_target(params, b_rounds) * binom.cdf(upper, b_rounds, p)

    sudden_death = (a_rounds + sd_rounds) * a_reach * _b_reaches_target(params, a_rounds)

    value = float(np.sum(a_wins) + np.sum(b_wins) + np.sum(sudden_death))
    logger.debug("er_series %s: truncated at round %d, tail bound %.3e", params, last, tail)
    return SeriesResult(value=value, truncation_round=last, tail_bound=tail)


def sudden_death_entry_series(params: RuleParams, epsilon: float = DEFAULT_EPSILON) -> SeriesResult:
    """Probability that regulation ends at exactly (m, n): both targets reached in the same round."""
    last, tail = _truncation_round(params, epsilon, _regulation_bound)
    rounds = np.arange(params.m, last + 1)
    terms = _a_reaches_target(params, rounds) * _b_reaches_target(params, rounds)
    return SeriesResult(value=float(np.sum(terms)), truncation_round=last, tail_bound=tail)
