"""mnrule: win probabilities, expected length and balance of (m, n) penalty shootouts."""

__version__ = "0.1.0"
