"""Commands package for mnrule CLI."""

from .winprob import winprob
from .rounds import rounds
from .balance import balance
from .sweep import sweep
from .simulate import simulate
from .tables import tables
from .audit import audit
from .handicap import handicap

__all__ = [
    "winprob",
    "rounds",
    "balance",
    "sweep",
    "simulate",
    "tables",
    "audit",
    "handicap",
]
