"""Sweep command for mnrule CLI."""

import click

from mnrule.balance import DEFAULT_GRID_SIZE, compare_models, default_q_grid, sweep_q
from mnrule.output import write_sweep_csv
from .common import OutputFailure, make_params, p_option, solver_errors, target_options


@click.command()
@target_options
@p_option
@click.option(
    "--grid-size",
    type=click.IntRange(min=2),
    default=DEFAULT_GRID_SIZE,
    show_default=True,
    help="Number of evenly spaced q values in [0.005, 0.995]",
)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default="-", help="CSV file (default: stdout)")
def sweep(m, n, p, grid_size, out_path):
    """Write P_A, P_B, ER and the sequential Q(A), ER(Q) over a grid of q as CSV.

    Columns: q,p_a,p_b,er,q_a_seq,er_seq. A summary of how far the sequential
    curves sit from the round-model curves goes to stderr.
    """
    make_params(m, n, p, 0.5)
    with solver_errors():
        rows = sweep_q(m, n, p, default_q_grid(grid_size))

    try:
        with click.open_file(out_path, "w", encoding="utf-8") as f:
            write_sweep_csv(rows, f)
            f.flush()
    except OSError as e:
        raise OutputFailure(f"cannot write sweep to {out_path}: {e.strerror or e}")
    if out_path != "-":
        click.echo(f"Wrote {len(rows)} rows to {out_path}", err=True)

    comparison = compare_models(rows)
    click.echo(f"max |Q(A) - P(A)| = {comparison.max_win_gap:.6g}", err=True)
    click.echo(f"max |ER(Q) - ER| = {comparison.max_rounds_gap:.6g}", err=True)
    for label, crossing in (("P(A)", comparison.p_a_crossing), ("Q(A)", comparison.q_a_crossing)):
        where = f"q = {crossing:.4f}" if crossing is not None else "not on this grid"
        click.echo(f"{label} crosses 0.5 at {where}", err=True)
