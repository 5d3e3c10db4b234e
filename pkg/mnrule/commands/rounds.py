"""Expected rounds command for mnrule CLI."""

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
from .methods import add_discrepancy_notes, add_expected_rounds, expand_methods, method_option


@click.command()
@rule_options
@method_option
@epsilon_option
@trials_option
@seed_option
@output_options
def rounds(m, n, p, q, method, epsilon, trials, seed, output_format, full_precision):
    """Compute the expected number of rounds ER, sudden death included."""
    params = make_params(m, n, p, q)
    methods = expand_methods(method, params)
    payload = OutputPayload("rounds", {**params.as_dict(), "requested": method, "epsilon": epsilon})

    with solver_errors():
        add_expected_rounds(payload, params, methods, epsilon, trials, seed)
    if method == "all":
        add_discrepancy_notes(payload, ["er"])

    emit(payload, output_format, full_precision)
