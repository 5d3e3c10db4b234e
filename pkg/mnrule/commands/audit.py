"""Strategyproofness audit command for mnrule CLI."""

import click

from mnrule.chain_solver import strategyproofness_audit
from mnrule.output import OutputPayload
from mnrule.rules import ShootoutModel
from .common import EXIT_CHECK_FAILED, emit, make_params, model_option, output_options, rule_options, solver_errors


@click.command()
@rule_options
@model_option
@output_options
@click.pass_context
def audit(ctx, m, n, p, q, model, output_format, full_precision):
    """Check that no team can raise its win probability by missing a kick on purpose.

    Exits 0 when there is no profitable deviation and 1 when there is one,
    after listing the offending states.
    """
    params = make_params(m, n, p, q)
    with solver_errors():
        report = strategyproofness_audit(params, ShootoutModel(model))

    payload = OutputPayload("audit", {**params.as_dict(), "model": model})
    payload.add("game_value", "dp", report.game_value, iterations=report.iterations)
    payload.add("honest_value", "dp", report.honest_value)
    payload.add("profitable_deviations", "dp", len(report.profitable_deviations))

    if report.is_strategyproof:
        payload.notes.append("no profitable deviations")
    for deviation in report.profitable_deviations:
        payload.notes.append(
            f"{deviation.team} at {deviation.state}: honest {deviation.honest_value:.6g}, "
            f"deliberate miss {deviation.deviation_value:.6g}"
        )

    emit(payload, output_format, full_precision)
    if not report.is_strategyproof:
        ctx.exit(EXIT_CHECK_FAILED)
