"""Domain types and adjudication for the (m, n) shootout rule.

A kicks first in every round and needs ``m`` goals; B kicks second and needs
``n < m`` goals. Verdicts are checked at the end of each round. If a round ends
at exactly (m, n) the shootout goes to sudden death, where the first round in
which exactly one team scores decides it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence, Tuple


class ShootoutError(Exception):
    """Base class for every error raised by mnrule."""

    pass


class InvalidRuleParams(ShootoutError, ValueError):
    """Raised when parameters or states break the rule's invariants."""

    pass


class SeriesTruncationError(ShootoutError):
    """Raised when a series cannot reach the requested epsilon before the round cap."""

    pass


class BracketError(ShootoutError):
    """Raised when a root-finding bracket does not contain a sign change."""

    pass


class ConvergenceError(ShootoutError):
    """Raised when an iterative solver hits its iteration cap."""

    pass


class Phase(Enum):
    REGULATION = "regulation"
    SUDDEN_DEATH = "sudden_death"


class RoundVerdict(Enum):
    A_WINS = "A wins"
    B_WINS = "B wins"
    GO_TO_SUDDEN_DEATH = "Sudden Death"
    CONTINUE = "continue"


class ShootoutResult(Enum):
    A_WINS = "A wins"
    B_WINS = "B wins"
    UNRESOLVED = "Unresolved"


class ShootoutModel(Enum):
    """Kicking protocol: rounds with end-of-round verdicts, or alternating kicks."""

    ROUND_BASED = "round"
    SEQUENTIAL = "sequential"


def check_probability(value: float, name: str) -> float:
    """Return ``value`` as float if it lies in the open interval (0, 1)."""
    value = float(value)
    if not 0.0 < value < 1.0:
        raise InvalidRuleParams(f"{name} must lie strictly between 0 and 1, got {value!r}")
    return value


@dataclass(frozen=True)
class RuleParams:
    """A shootout instance: targets (m, n) and per-kick success probabilities (p, q)."""

    m: int
    n: int
    p: float
    q: float

    def __post_init__(self):
        for name in ("m", "n"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise InvalidRuleParams(f"{name} must be a positive integer, got {value!r}")
        if self.m <= self.n:
            raise InvalidRuleParams(f"m must exceed n, got (m, n) = ({self.m}, {self.n})")
        object.__setattr__(self, "p", check_probability(self.p, "p"))
        object.__setattr__(self, "q", check_probability(self.q, "q"))

    @property
    def decision_rate(self) -> float:
        """Probability that a sudden-death round is decisive, p + q - 2pq."""
        return self.p + self.q - 2 * self.p * self.q

    def with_q(self, q: float) -> "RuleParams":
        return RuleParams(self.m, self.n, self.p, q)

    def as_dict(self) -> dict:
        return {"m": self.m, "n": self.n, "p": self.p, "q": self.q}


@dataclass(frozen=True)
class ScoreState:
    """Goals after both kicks of round ``round`` (or during sudden death)."""

    a_goals: int
    b_goals: int
    round: int
    phase: Phase = Phase.REGULATION

    def validate(self, params: RuleParams) -> None:
        if self.a_goals < 0 or self.b_goals < 0:
            raise InvalidRuleParams(f"goal counts must be non-negative, got ({self.a_goals}, {self.b_goals})")
        if self.round < 1:
            raise InvalidRuleParams(f"round must be positive, got {self.round}")
        if self.a_goals > self.round or self.b_goals > self.round:
            raise InvalidRuleParams(
                f"score ({self.a_goals}, {self.b_goals}) is impossible after {self.round} round(s)"
            )
        if self.phase is Phase.REGULATION and (self.a_goals > params.m or self.b_goals > params.n):
            raise InvalidRuleParams(
                f"score ({self.a_goals}, {self.b_goals}) exceeds the ({params.m}, {params.n}) targets"
            )


def adjudicate_round(params: RuleParams, state: ScoreState) -> RoundVerdict:
    """Verdict at the end of a regulation round."""
    if state.phase is not Phase.REGULATION:
        raise InvalidRuleParams("adjudicate_round only applies to regulation rounds")
    state.validate(params)

    a_done = state.a_goals == params.m
    b_done = state.b_goals == params.n
    if a_done and b_done:
        return RoundVerdict.GO_TO_SUDDEN_DEATH
    if a_done:
        return RoundVerdict.A_WINS
    if b_done:
        return RoundVerdict.B_WINS
    return RoundVerdict.CONTINUE


def adjudicate_sudden_death(a_scored: bool, b_scored: bool) -> RoundVerdict:
    """Verdict of one sudden-death round."""
    if a_scored and not b_scored:
        return RoundVerdict.A_WINS
    if b_scored and not a_scored:
        return RoundVerdict.B_WINS
    return RoundVerdict.CONTINUE


# B's entry is None when a sequential shootout ends on A's kick.
Kicks = Tuple[bool, Optional[bool]]


@dataclass(frozen=True)
class Transcript:
    """Kick-by-kick record of one shootout.

    ``final_score`` is the score at the end of regulation; sudden-death goals are
    recorded in ``sd_rounds`` only.
    """

    rounds: Tuple[Kicks, ...]
    result: ShootoutResult
    final_score: Tuple[int, int]
    sd_rounds: Tuple[Kicks, ...] = ()
    model: ShootoutModel = ShootoutModel.ROUND_BASED

    @property
    def went_to_sudden_death(self) -> bool:
        return bool(self.sd_rounds)

    @property
    def total_rounds(self) -> float:
        """Rounds played, counting a sequential shootout that ends on A's kick as half a round."""
        played = len(self.rounds) + len(self.sd_rounds)
        if self.rounds and self.rounds[-1][1] is None:
            return played - 0.5
        return float(played)


@dataclass
class ReplayOutcome:
    result: ShootoutResult
    final_score: Tuple[int, int]
    regulation_verdict: RoundVerdict
    history: list = field(default_factory=list)


def replay_transcript(params: RuleParams, transcript: Transcript) -> ReplayOutcome:
    """Re-derive the result of a transcript from its kick booleans alone."""
    if transcript.model is ShootoutModel.SEQUENTIAL:
        return _replay_sequential(params, transcript.rounds)
    return _replay_rounds(params, transcript.rounds, transcript.sd_rounds)


def _replay_rounds(params: RuleParams, rounds: Sequence[Kicks], sd_rounds: Sequence[Kicks]) -> ReplayOutcome:
    a = b = 0
    verdict = RoundVerdict.CONTINUE
    history = []
    for index, (a_scored, b_scored) in enumerate(rounds, start=1):
        if verdict is not RoundVerdict.CONTINUE:
            raise InvalidRuleParams(f"transcript continues after a verdict in round {index - 1}")
        a += bool(a_scored)
        b += bool(b_scored)
        verdict = adjudicate_round(params, ScoreState(a, b, index))
        history.append(verdict)

    if verdict is RoundVerdict.A_WINS:
        result = ShootoutResult.A_WINS
    elif verdict is RoundVerdict.B_WINS:
        result = ShootoutResult.B_WINS
    else:
        result = ShootoutResult.UNRESOLVED

    if sd_rounds and verdict is not RoundVerdict.GO_TO_SUDDEN_DEATH:
        raise InvalidRuleParams("sudden-death rounds recorded although regulation did not end at (m, n)")

    if verdict is RoundVerdict.GO_TO_SUDDEN_DEATH:
        for a_scored, b_scored in sd_rounds:
            sd_verdict = adjudicate_sudden_death(bool(a_scored), bool(b_scored))
            history.append(sd_verdict)
            if sd_verdict is RoundVerdict.A_WINS:
                result = ShootoutResult.A_WINS
                break
            if sd_verdict is RoundVerdict.B_WINS:
                result = ShootoutResult.B_WINS
                break

    return ReplayOutcome(result=result, final_score=(a, b), regulation_verdict=verdict, history=history)


def _replay_sequential(params: RuleParams, rounds: Sequence[Kicks]) -> ReplayOutcome:
    a = b = 0
    result = ShootoutResult.UNRESOLVED
    for a_scored, b_scored in rounds:
        if result is not ShootoutResult.UNRESOLVED:
            raise InvalidRuleParams("transcript continues after the shootout was decided")
        a += bool(a_scored)
        if a == params.m:
            result = ShootoutResult.A_WINS
            continue
        b += bool(b_scored)
        if b == params.n:
            result = ShootoutResult.B_WINS
    verdict = {
        ShootoutResult.A_WINS: RoundVerdict.A_WINS,
        ShootoutResult.B_WINS: RoundVerdict.B_WINS,
    }.get(result, RoundVerdict.CONTINUE)
    return ReplayOutcome(result=result, final_score=(a, b), regulation_verdict=verdict)
