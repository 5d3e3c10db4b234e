"""Balancing probability command for mnrule CLI."""

import click

from mnrule.balance import RESIDUAL_TOLERANCE, balancing_curve
from mnrule.output import OutputPayload
from .common import PROBABILITY, emit, make_params, output_options, solver_errors, target_options


@click.command()
@target_options
@click.option(
    "-p",
    "p_values",
    type=PROBABILITY,
    required=True,
    multiple=True,
    help="A's per-kick success probability (repeat for a q*(p) curve)",
)
@click.option(
    "--tol",
    type=click.FloatRange(min=0, min_open=True),
    default=RESIDUAL_TOLERANCE,
    show_default=True,
    help="Largest accepted |P_A - P_B| at the returned q",
)
@output_options
def balance(m, n, p_values, tol, output_format, full_precision):
    """Find B's balancing probability q*(p), the q at which P_A = P_B."""
    for p in p_values:
        make_params(m, n, p, 0.5)
    payload = OutputPayload("balance", {"m": m, "n": n, "p": ",".join(str(p) for p in p_values), "tol": tol})

    with solver_errors():
        results = balancing_curve(m, n, p_values, tol)

    for result in results:
        payload.add(
            "q_star",
            "dp",
            result.q_star,
            p=result.p,
            rounded=round(result.q_star, 2),
            residual=result.residual,
            iterations=result.iterations,
        )
    emit(payload, output_format, full_precision)
