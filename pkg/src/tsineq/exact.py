"""Tiny helpers that keep rational arithmetic rational.

Python's ``/`` turns ``int / int`` into a float, which would silently
break the exactness guarantees on purely discrete windows.  Every
division in a formula that may run on rational inputs goes through
:func:`exact_div`; halving goes through :func:`half`.
"""

from fractions import Fraction

EXACT_TYPES = (int, Fraction)


def is_exact(*values) -> bool:
    return all(isinstance(v, EXACT_TYPES) for v in values)


def exact_div(num, den):
    """num / den, returning a Fraction when both operands are exact."""
    if isinstance(num, EXACT_TYPES) and isinstance(den, EXACT_TYPES):
        out = Fraction(num) / Fraction(den)
        return int(out) if out.denominator == 1 else out
    return num / den


def half(value):
    """value / 2 without losing exactness."""
    return exact_div(value, 2)
