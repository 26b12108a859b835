"""Exact-rational parsing and rendering helpers."""

from fractions import Fraction
from numbers import Rational

from .errors import SchemaViolation


def to_fraction(x) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats and decimal strings are refused: every quantity in this package is
    exact and a float would silently smuggle in rounding.
    """
    if isinstance(x, bool):
        raise SchemaViolation(f"not a rational: {x!r}")
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if not s or any(c in s for c in ".eE"):
            raise SchemaViolation(f"not a decimal-free rational string: {x!r}")
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaViolation(f"not a rational: {x!r}") from exc
    raise SchemaViolation(f"not a rational: {x!r}")


def fmt(q, decimal: bool = False) -> str:
    q = Fraction(q)
    s = str(q)
    if decimal and q.denominator != 1:
        s += f" (~{float(q):.6f})"
    return s
