"""Common CLI utilities for mnrule commands."""

from contextlib import contextmanager

import click

from mnrule.output import OutputFormat, OutputPayload
from mnrule.rules import InvalidRuleParams, RuleParams, ShootoutError
from mnrule.series_formulas import DEFAULT_EPSILON
from mnrule.simulator import DEFAULT_TRIALS

EXIT_CHECK_FAILED = 1
EXIT_BAD_INPUT = 2
EXIT_SOLVER_FAILURE = 3
EXIT_IO_FAILURE = 4

PROBABILITY = click.FloatRange(0, 1, min_open=True, max_open=True)


class SolverFailure(click.ClickException):
    exit_code = EXIT_SOLVER_FAILURE


class OutputFailure(click.ClickException):
    exit_code = EXIT_IO_FAILURE


# Shared option definitions
m_option = click.option("-m", "m", type=click.IntRange(min=1), required=True, help="Goals A (kicks first) needs")
n_option = click.option("-n", "n", type=click.IntRange(min=1), required=True, help="Goals B (kicks second) needs")
p_option = click.option("-p", "p", type=PROBABILITY, required=True, help="A's per-kick success probability")
q_option = click.option("-q", "q", type=PROBABILITY, required=True, help="B's per-kick success probability")

epsilon_option = click.option(
    "--epsilon",
    type=click.FloatRange(min=0, min_open=True),
    default=DEFAULT_EPSILON,
    show_default=True,
    help="Series truncation tolerance",
)
trials_option = click.option(
    "--trials", type=click.IntRange(min=1), default=DEFAULT_TRIALS, show_default=True, help="Monte Carlo trials"
)
seed_option = click.option(
    "--seed", type=click.IntRange(0, 2**64 - 1), default=0, show_default=True, help="Monte Carlo seed"
)
model_option = click.option(
    "--model",
    type=click.Choice(["round", "sequential"]),
    default="round",
    show_default=True,
    help="Round-based shootout or alternating kicks",
)


def target_options(func):
    """Decorator that adds -m and -n."""
    func = n_option(func)
    func = m_option(func)
    return func


def rule_options(func):
    """Decorator that adds the four rule parameters -m, -n, -p and -q."""
    func = q_option(func)
    func = p_option(func)
    func = target_options(func)
    return func


def output_options(func):
    """Decorator that adds --format and --full-precision."""
    func = click.option(
        "--full-precision", is_flag=True, help="Print shortest round-trip floats instead of 6 significant digits"
    )(func)
    func = click.option(
        "--format",
        "output_format",
        type=click.Choice([f.value for f in OutputFormat]),
        default=OutputFormat.HUMAN.value,
        show_default=True,
        help="Output format",
    )(func)
    return func


def make_params(m, n, p, q) -> RuleParams:
    """Build RuleParams, turning invariant violations into a usage error (exit 2)."""
    try:
        return RuleParams(m, n, p, q)
    except InvalidRuleParams as e:
        raise click.UsageError(str(e))


@contextmanager
def solver_errors():
    """Map library errors onto CLI exit codes."""
    try:
        yield
    except InvalidRuleParams as e:
        raise click.UsageError(str(e))
    except ShootoutError as e:
        raise SolverFailure(f"{type(e).__name__}: {e}")


def emit(payload: OutputPayload, output_format: str, full_precision: bool) -> None:
    click.echo(payload.render(OutputFormat(output_format), full_precision), nl=False)
