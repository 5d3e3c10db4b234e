"""Win probability command for mnrule CLI."""

import click

from mnrule.output import OutputPayload
from .common import (
    emit,
    epsilon_option,
    make_params,
    output_options,
    rule_options,
    seed_option,
    solver_errors,
    trials_option,
)
from .methods import add_discrepancy_notes, add_win_probabilities, expand_methods, method_option


@click.command()
@rule_options
@method_option
@epsilon_option
@trials_option
@seed_option
@output_options
def winprob(m, n, p, q, method, epsilon, trials, seed, output_format, full_precision):
    """Compute P_A and P_B for the (m, n) rule.

    With --method all, every applicable method runs and the largest
    discrepancy between the exact methods is reported.
    """
    params = make_params(m, n, p, q)
    methods = expand_methods(method, params)
    payload = OutputPayload("winprob", {**params.as_dict(), "requested": method, "epsilon": epsilon})

    with solver_errors():
        add_win_probabilities(payload, params, methods, epsilon, trials, seed)
    if method == "all":
        add_discrepancy_notes(payload, ["p_a", "p_b"])

    emit(payload, output_format, full_precision)
