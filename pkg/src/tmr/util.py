from __future__ import annotations

from decimal import Decimal
from fractions import Fraction
from math import floor


def round_half_up(value: Fraction | float | int, places: int) -> Decimal:
    """Round to ``places`` decimals, halves away from zero, without float error.

    Floats are taken at their exact binary value.
    """
    x = Fraction(value)
    scale = 10 ** places
    sign = -1 if x < 0 else 1
    n = floor(abs(x) * scale + Fraction(1, 2))
    return (Decimal(sign * n) / Decimal(scale)).quantize(Decimal(1).scaleb(-places))
