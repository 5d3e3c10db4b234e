"""Evaluation of one quantity by several methods, shared by winprob and rounds."""

import click

from mnrule.chain_solver import closed_form_21_er, closed_form_21_win, solve_round_model
from mnrule.output import OutputPayload, max_abs_difference
from mnrule.rules import RuleParams
from mnrule.series_formulas import er_series, pa_series, pb_series
from mnrule.simulator import SimConfig, estimate

METHOD_CHOICES = ["dp", "series", "closed-form", "mc", "all"]
EXACT_METHODS = ("dp", "series", "closed-form")

method_option = click.option(
    "--method",
    type=click.Choice(METHOD_CHOICES),
    default="dp",
    show_default=True,
    help="dp: exact chain; series: truncated series; closed-form: (2, 1) only; mc: Monte Carlo",
)


def expand_methods(method: str, params: RuleParams):
    has_closed_form = (params.m, params.n) == (2, 1)
    if method == "all":
        return [name for name in METHOD_CHOICES[:-1] if name != "closed-form" or has_closed_form]
    if method == "closed-form" and not has_closed_form:
        raise click.UsageError("the closed form exists only for (m, n) = (2, 1)")
    return [method]


def add_win_probabilities(payload: OutputPayload, params: RuleParams, methods, epsilon, trials, seed):
    for method in methods:
        if method == "dp":
            solution = solve_round_model(params)
            payload.add("p_a", "dp", solution.p_a_win)
            payload.add("p_b", "dp", solution.p_b_win)
        elif method == "series":
            for quantity, series in (("p_a", pa_series(params, epsilon)), ("p_b", pb_series(params, epsilon))):
                payload.add(
                    quantity,
                    "series",
                    series.value,
                    epsilon=epsilon,
                    tail_bound=series.tail_bound,
                    truncation_round=series.truncation_round,
                )
        elif method == "closed-form":
            p_a = closed_form_21_win(params.p, params.q)
            payload.add("p_a", "closed-form", p_a)
            payload.add("p_b", "closed-form", 1.0 - p_a)
        elif method == "mc":
            result = estimate(SimConfig(params, trials=trials, seed=seed))
            meta = dict(trials=trials, seed=seed, unresolved=result.unresolved_count)
            payload.add("p_a", "mc", result.a_win_freq, ci95=result.ci95_halfwidth_winfreq, **meta)
            payload.add("p_b", "mc", 1.0 - result.a_win_freq, ci95=result.ci95_halfwidth_winfreq, **meta)


def add_expected_rounds(payload: OutputPayload, params: RuleParams, methods, epsilon, trials, seed):
    for method in methods:
        if method == "dp":
            payload.add("er", "dp", solve_round_model(params).expected_rounds)
        elif method == "series":
            series = er_series(params, epsilon)
            payload.add(
                "er",
                "series",
                series.value,
                epsilon=epsilon,
                tail_bound=series.tail_bound,
                truncation_round=series.truncation_round,
            )
        elif method == "closed-form":
            payload.add("er", "closed-form", closed_form_21_er(params.p, params.q))
        elif method == "mc":
            result = estimate(SimConfig(params, trials=trials, seed=seed))
            payload.add(
                "er",
                "mc",
                result.mean_rounds,
                ci95=result.mean_rounds_ci95_halfwidth,
                trials=trials,
                seed=seed,
                unresolved=result.unresolved_count,
            )


def add_discrepancy_notes(payload: OutputPayload, quantities) -> float:
    """Note the largest spread between exact methods, plus how far Monte Carlo sits from dp."""
    worst = 0.0
    for quantity in quantities:
        values = payload.values(quantity)
        exact = [v for method, v in values.items() if method in EXACT_METHODS]
        if len(exact) > 1:
            worst = max(worst, max_abs_difference(exact))
        if "mc" in values and "dp" in values:
            record = next(r for r in payload.records if r.quantity == quantity and r.method == "mc")
            halfwidth = record.metadata["ci95"]
            payload.notes.append(
                f"{quantity}: mc - dp = {values['mc'] - values['dp']:+.3g} (95% half-width {halfwidth:.3g})"
            )
    payload.notes.insert(0, f"max discrepancy between exact methods: {worst:.3e}")
    return worst
