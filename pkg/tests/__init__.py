"""Test package for mnrule."""
