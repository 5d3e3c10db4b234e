"""Table reproduction command for mnrule CLI."""

import click

from mnrule.balance import balancing_probability
from mnrule.chain_solver import solve_round_model
from mnrule.output import OutputFormat, OutputPayload, format_number
from mnrule.rules import RuleParams
from mnrule.series_formulas import er_series
from mnrule.ui import generate_line
from .common import PROBABILITY, emit, output_options, solver_errors

TABLE_RULES = ((5, 4), (4, 3), (3, 2), (2, 1))


@click.command()
@click.option("-p", "p", type=PROBABILITY, default=0.75, show_default=True, help="A's per-kick success probability")
@click.option(
    "--er-q",
    type=PROBABILITY,
    default=0.6,
    show_default=True,
    help="B's success probability used for the expected-rounds column",
)
@output_options
def tables(p, er_q, output_format, full_precision):
    """Recompute the balancing-probability and expected-rounds tables.

    For (m, n) in (5, 4), (4, 3), (3, 2), (2, 1): q*(p), and ER(m, n, p, ER_Q)
    by both the exact chain and the series, each rounded to 2 decimals next to
    the full value.
    """
    payload = OutputPayload("tables", {"p": p, "er_q": er_q})
    rows = []
    with solver_errors():
        for m, n in TABLE_RULES:
            balance = balancing_probability(m, n, p)
            params = RuleParams(m, n, p, er_q)
            er_dp = solve_round_model(params).expected_rounds
            er_sum = er_series(params)
            payload.add("q_star", "dp", balance.q_star, m=m, n=n, rounded=round(balance.q_star, 2))
            payload.add("er", "dp", er_dp, m=m, n=n, rounded=round(er_dp, 2))
            payload.add("er", "series", er_sum.value, m=m, n=n, rounded=round(er_sum.value, 2))
            rows.append((m, n, balance.q_star, er_dp, er_sum.value))

    if OutputFormat(output_format) is not OutputFormat.HUMAN:
        emit(payload, output_format, full_precision)
        return

    click.echo(f"B's balancing probability q*(p) and ER(m, n, p, {er_q}) for p = {p}")
    click.echo(generate_line("=", 92), nl=False)
    click.echo(f"{'m':>2} {'n':>2}  {'q*(p)':>6}  {'full':<20} {'ER':>6}  {'full':<20} {'series':<20}")
    for m, n, q_star, er, er_by_series in rows:
        click.echo(
            f"{m:>2} {n:>2}  {q_star:>6.2f}  {format_number(q_star, full_precision):<20} "
            f"{er:>6.2f}  {format_number(er, full_precision):<20} {format_number(er_by_series, full_precision):<20}"
        )
