"""Seeded Monte Carlo simulation of both shootout models.

Random stream layout
--------------------
Trials are grouped into blocks of BLOCK_SIZE lanes. Block ``k`` draws from
``Generator(PCG64(SeedSequence(seed, spawn_key=(k,))))``; every round (sudden
death included) the block draws one ``(BLOCK_SIZE, 2)`` array of uniforms, and
trial ``i`` reads row ``i % BLOCK_SIZE`` of block ``i // BLOCK_SIZE``: column 0
decides A's kick, column 1 B's. A trial's kicks are therefore a pure function of
(seed, trial index), independent of how many trials run or in which order, and
``simulate_one`` reproduces exactly the trial that ``estimate`` counted.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from mnrule.rules import (
    InvalidRuleParams,
    Phase,
    RoundVerdict,
    RuleParams,
    ScoreState,
    ShootoutModel,
    ShootoutResult,
    Transcript,
    adjudicate_round,
    adjudicate_sudden_death,
)

logger = logging.getLogger(__name__)

BLOCK_SIZE = 4096
DEFAULT_SD_ROUND_CAP = 10_000
DEFAULT_TRIALS = 100_000
Z_95 = 1.959963984540054

_UNRESOLVED, _A_WON, _B_WON = 0, 1, 2


@dataclass(frozen=True)
class SimConfig:
    params: RuleParams
    model: ShootoutModel = ShootoutModel.ROUND_BASED
    trials: int = DEFAULT_TRIALS
    seed: int = 0
    sd_round_cap: int = DEFAULT_SD_ROUND_CAP

    def __post_init__(self):
        if self.trials < 1:
            raise InvalidRuleParams(f"trials must be at least 1, got {self.trials}")
        if self.sd_round_cap < 1:
            raise InvalidRuleParams(f"sd_round_cap must be at least 1, got {self.sd_round_cap}")
        if not 0 <= self.seed < 2**64:
            raise InvalidRuleParams(f"seed must be a 64-bit unsigned integer, got {self.seed}")


@dataclass(frozen=True)
class BatchEstimate:
    """Batch statistics; frequencies and means are over resolved trials only."""

    trials: int
    a_wins: int
    b_wins: int
    unresolved_count: int
    a_win_freq: float
    mean_rounds: float
    ci95_halfwidth_winfreq: float
    mean_rounds_ci95_halfwidth: float

    @property
    def resolved_count(self) -> int:
        return self.a_wins + self.b_wins

    @property
    def unresolved_fraction(self) -> float:
        return self.unresolved_count / self.trials

    @property
    def std_error(self) -> float:
        return self.ci95_halfwidth_winfreq / Z_95


@dataclass(frozen=True)
class BatchTally:
    """Additive counts for a set of trials; ``merge`` is associative and commutative."""

    trials: int = 0
    a_wins: int = 0
    b_wins: int = 0
    rounds_sum: float = 0.0
    rounds_sq_sum: float = 0.0

    def merge(self, other: "BatchTally") -> "BatchTally":
        return BatchTally(
            trials=self.trials + other.trials,
            a_wins=self.a_wins + other.a_wins,
            b_wins=self.b_wins + other.b_wins,
            rounds_sum=self.rounds_sum + other.rounds_sum,
            rounds_sq_sum=self.rounds_sq_sum + other.rounds_sq_sum,
        )

    def to_estimate(self) -> BatchEstimate:
        resolved = self.a_wins + self.b_wins
        if resolved == 0:
            nan = float("nan")
            return BatchEstimate(self.trials, 0, 0, self.trials, nan, nan, nan, nan)

        freq = self.a_wins / resolved
        mean = self.rounds_sum / resolved
        variance = max(self.rounds_sq_sum / resolved - mean * mean, 0.0)
        return BatchEstimate(
            trials=self.trials,
            a_wins=self.a_wins,
            b_wins=self.b_wins,
            unresolved_count=self.trials - resolved,
            a_win_freq=freq,
            mean_rounds=mean,
            ci95_halfwidth_winfreq=Z_95 * math.sqrt(freq * (1 - freq) / resolved),
            mean_rounds_ci95_halfwidth=Z_95 * math.sqrt(variance / resolved),
        )


def block_generator(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(block,))))


def _round_draws(rng: np.random.Generator, p: float, q: float):
    """One round of kicks for every lane of a block: (A scored, B scored) boolean arrays."""
    draws = rng.random((BLOCK_SIZE, 2))
    return draws[:, 0] < p, draws[:, 1] < q


def simulate_one(config: SimConfig, trial_index: int) -> Transcript:
    """Play trial ``trial_index`` of the batch and record every kick."""
    if trial_index < 0:
        raise InvalidRuleParams(f"trial_index must be non-negative, got {trial_index}")
    block, lane = divmod(trial_index, BLOCK_SIZE)
    rng = block_generator(config.seed, block)
    params = config.params

    def kicks():
        while True:
            a_scored, b_scored = _round_draws(rng, params.p, params.q)
            yield bool(a_scored[lane]), bool(b_scored[lane])

    if config.model is ShootoutModel.SEQUENTIAL:
        return _play_sequential(params, kicks())
    return _play_rounds(params, kicks(), config.sd_round_cap)


def _play_rounds(params: RuleParams, kicks, sd_round_cap: int) -> Transcript:
    rounds, sd_rounds = [], []
    a = b = 0
    phase = Phase.REGULATION
    result = ShootoutResult.UNRESOLVED
    for a_scored, b_scored in kicks:
        if phase is Phase.REGULATION:
            rounds.append((a_scored, b_scored))
            a += a_scored
            b += b_scored
            verdict = adjudicate_round(params, ScoreState(a, b, len(rounds)))
            if verdict is RoundVerdict.GO_TO_SUDDEN_DEATH:
                phase = Phase.SUDDEN_DEATH
                continue
        else:
            sd_rounds.append((a_scored, b_scored))
            verdict = adjudicate_sudden_death(a_scored, b_scored)
            if verdict is RoundVerdict.CONTINUE and len(sd_rounds) >= sd_round_cap:
                break

        if verdict is RoundVerdict.A_WINS:
            result = ShootoutResult.A_WINS
            break
        if verdict is RoundVerdict.B_WINS:
            result = ShootoutResult.B_WINS
            break

    return Transcript(rounds=tuple(rounds), result=result, final_score=(a, b), sd_rounds=tuple(sd_rounds))


def _play_sequential(params: RuleParams, kicks) -> Transcript:
    rounds = []
    a = b = 0
    for a_scored, b_scored in kicks:
        a += a_scored
        if a == params.m:
            rounds.append((a_scored, None))
            result = ShootoutResult.A_WINS
            break
        rounds.append((a_scored, b_scored))
        b += b_scored
        if b == params.n:
            result = ShootoutResult.B_WINS
            break
    return Transcript(rounds=tuple(rounds), result=result, final_score=(a, b), model=ShootoutModel.SEQUENTIAL)


def _simulate_block(config: SimConfig, block: int, lanes: int) -> BatchTally:
    """Play the first ``lanes`` trials of a block together."""
    params = config.params
    m, n = params.m, params.n
    rng = block_generator(config.seed, block)

    a = np.zeros(lanes, dtype=np.int64)
    b = np.zeros(lanes, dtype=np.int64)
    rounds = np.zeros(lanes)
    sd_played = np.zeros(lanes, dtype=np.int64)
    in_sudden_death = np.zeros(lanes, dtype=bool)
    done = np.zeros(lanes, dtype=bool)
    winner = np.full(lanes, _UNRESOLVED, dtype=np.int8)

    while not done.all():
        a_scored, b_scored = _round_draws(rng, params.p, params.q)
        a_scored, b_scored = a_scored[:lanes], b_scored[:lanes]
        active = ~done

        if config.model is ShootoutModel.SEQUENTIAL:
            a += a_scored & active
            a_won = active & (a == m)
            b_kicks = active & ~a_won
            b += b_scored & b_kicks
            b_won = b_kicks & (b == n)
            rounds += 0.5 * a_won + 1.0 * b_kicks
        else:
            regulation = active & ~in_sudden_death
            sudden_death = active & in_sudden_death
            a += a_scored & regulation
            b += b_scored & regulation
            rounds += active
            sd_played += sudden_death

            a_won = (regulation & (a == m) & (b < n)) | (sudden_death & a_scored & ~b_scored)
            b_won = (regulation & (b == n) & (a < m)) | (sudden_death & b_scored & ~a_scored)
            capped = sudden_death & ~(a_won | b_won) & (sd_played >= config.sd_round_cap)
            in_sudden_death |= regulation & (a == m) & (b == n)
            done |= capped

        winner[a_won] = _A_WON
        winner[b_won] = _B_WON
        done |= a_won | b_won

    resolved = winner != _UNRESOLVED
    resolved_rounds = rounds[resolved]
    return BatchTally(
        trials=lanes,
        a_wins=int(np.count_nonzero(winner == _A_WON)),
        b_wins=int(np.count_nonzero(winner == _B_WON)),
        rounds_sum=float(resolved_rounds.sum()),
        rounds_sq_sum=float(np.square(resolved_rounds).sum()),
    )


def estimate(config: SimConfig) -> BatchEstimate:
    """Run ``config.trials`` trials and summarize them."""
    blocks = range(math.ceil(config.trials / BLOCK_SIZE))
    tallies = (
        _simulate_block(config, block, min(BLOCK_SIZE, config.trials - block * BLOCK_SIZE)) for block in blocks
    )
    result = reduce(BatchTally.merge, tallies, BatchTally()).to_estimate()

    logger.debug("simulated %d trials of %s (%s model)", config.trials, config.params, config.model.value)
    if result.unresolved_count:
        logger.warning(
            "%d of %d trials still in sudden death after %d rounds; reported as unresolved",
            result.unresolved_count,
            result.trials,
            config.sd_round_cap,
        )
    return result
