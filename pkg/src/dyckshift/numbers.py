"""Exact/float number parsing and display helpers."""

from __future__ import annotations

from fractions import Fraction

from .errors import InvalidInput


def parse_number(value):
    """'p/q' and decimal strings become Fractions; ints too; floats stay floats."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InvalidInput(f"not a number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return value
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise InvalidInput(f"not a number: {value!r}") from None
    raise InvalidInput(f"not a number: {value!r}")


def is_exact(x) -> bool:
    return isinstance(x, (Fraction, int))


def format_number(x, precision: int = 12):
    """JSON-friendly value: exact fractions as 'p/q' strings, floats as floats."""
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else str(x.numerator)
    if isinstance(x, int):
        return str(x)
    return round(float(x), precision)


def display(x, precision: int = 6) -> str:
    """'p/q (decimal)' for exact values, plain decimal otherwise."""
    if isinstance(x, (Fraction, int)):
        x = Fraction(x)
        dec = f"{float(x):.{precision}f}"
        return dec if x.denominator == 1 else f"{x} ({dec})"
    return f"{float(x):.{precision}f}"
