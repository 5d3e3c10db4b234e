"""Handicap search command for mnrule CLI."""

import click

from mnrule.balance import handicap_search
from mnrule.output import OutputPayload
from .common import emit, output_options, p_option, q_option, solver_errors


@click.command()
@p_option
@q_option
@click.option("--m-max", type=click.IntRange(min=2), default=6, show_default=True, help="Largest target for A")
@click.option("--top", type=click.IntRange(min=1), default=None, help="Show only the fairest TOP pairs")
@output_options
def handicap(p, q, m_max, top, output_format, full_precision):
    """Rank every (m, n) rule with n < m <= M_MAX by how close it brings P_A to 1/2."""
    payload = OutputPayload("handicap", {"p": p, "q": q, "m_max": m_max})

    with solver_errors():
        candidates = handicap_search(p, q, m_max)

    for rank, candidate in enumerate(candidates[:top], start=1):
        payload.add(
            "p_a",
            "dp",
            candidate.p_a,
            rank=rank,
            m=candidate.m,
            n=candidate.n,
            fairness_gap=candidate.fairness_gap,
        )
    emit(payload, output_format, full_precision)
