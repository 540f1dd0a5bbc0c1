from __future__ import annotations

from decimal import Context, Decimal
from fractions import Fraction

DEFAULT_PRECISION = 30


def decimal_str(x: Fraction, precision: int = DEFAULT_PRECISION) -> str:
    """Decimal rendering with ``precision`` significant digits."""
    x = Fraction(x)
    ctx = Context(prec=precision)
    return str(ctx.divide(Decimal(x.numerator), Decimal(x.denominator)))


def fraction_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
