"""Main CLI module for mnrule."""

import logging
import sys

import click

from mnrule import __version__
from mnrule.commands import (
    winprob,
    rounds,
    balance,
    sweep,
    simulate,
    tables,
    audit,
    handicap,
)

LOG_LEVELS = (logging.WARNING, logging.INFO, logging.DEBUG)


@click.group()
@click.version_option(__version__, prog_name="mnrule")
@click.option("-v", "--verbose", count=True, help="Log to stderr (-v info, -vv debug)")
def main(verbose):
    """(m, n) penalty shootout rule

    A kicks first and needs m goals, B kicks second and needs n < m goals;
    a round ending at exactly (m, n) goes to sudden death. Every command takes
    all of its inputs as flags, so the same flags always give the same output.
    """
    logging.basicConfig(
        stream=sys.stderr,
        level=LOG_LEVELS[min(verbose, len(LOG_LEVELS) - 1)],
        format="%(levelname)s %(name)s: %(message)s",
    )


main.add_command(winprob)
main.add_command(rounds)
main.add_command(balance)
main.add_command(sweep)
main.add_command(simulate)
main.add_command(tables)
main.add_command(audit)
main.add_command(handicap)


if __name__ == "__main__":
    main()
