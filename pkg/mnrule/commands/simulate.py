"""Monte Carlo simulation command for mnrule CLI."""

import click

from mnrule.output import OutputPayload
from mnrule.rules import ShootoutModel
from mnrule.simulator import DEFAULT_SD_ROUND_CAP, SimConfig, estimate, simulate_one
from mnrule.ui import render_transcript
from .common import emit, make_params, model_option, output_options, rule_options, seed_option, trials_option


@click.command()
@rule_options
@trials_option
@seed_option
@model_option
@click.option(
    "--sd-round-cap",
    type=click.IntRange(min=1),
    default=DEFAULT_SD_ROUND_CAP,
    show_default=True,
    help="Sudden-death rounds after which a trial is reported as unresolved",
)
@click.option(
    "--show-transcripts",
    type=click.IntRange(min=0),
    default=0,
    metavar="K",
    help="Render the first K trials kick by kick",
)
@output_options
def simulate(m, n, p, q, trials, seed, model, sd_round_cap, show_transcripts, output_format, full_precision):
    """Simulate shootouts and estimate A's win frequency and the mean number of rounds."""
    params = make_params(m, n, p, q)
    config = SimConfig(params, ShootoutModel(model), trials, seed, sd_round_cap)

    result = estimate(config)
    payload = OutputPayload(
        "simulate",
        {**params.as_dict(), "trials": trials, "seed": seed, "model": model, "sd_round_cap": sd_round_cap},
    )
    payload.add("a_win_freq", "mc", result.a_win_freq, ci95=result.ci95_halfwidth_winfreq)
    payload.add("mean_rounds", "mc", result.mean_rounds, ci95=result.mean_rounds_ci95_halfwidth)
    payload.add("unresolved_count", "mc", result.unresolved_count, fraction=result.unresolved_fraction)

    for index in range(min(show_transcripts, trials)):
        payload.notes.append(f"Trial {index}\n" + render_transcript(simulate_one(config, index)))

    emit(payload, output_format, full_precision)
