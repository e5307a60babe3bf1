from fractions import Fraction
from math import lcm
from typing import Annotated, Iterable, Optional, Union

import numpy as np
from pydantic import BeforeValidator, PlainSerializer

RationalLike = Union[Fraction, int, str, float]

# keep scaled search arithmetic well inside int64
INT_LIMIT = 2 ** 62


def parse_rational(value: RationalLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if value != value or value in (float('inf'), float('-inf')):
            raise ValueError(f"not a rational: {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"not a rational: {value!r}") from None
    raise ValueError(f"not a rational: {value!r}")


def fraction_str(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


Rational = Annotated[
    Fraction,
    BeforeValidator(parse_rational),
    PlainSerializer(fraction_str, return_type=str),
]


def render_decimal(value: Fraction, places: int = 12) -> str:
    """Long division of an exact rational, truncated after ``places`` digits.

    A trailing ``...`` marks a truncated (inexact) rendering.
    """
    value = Fraction(value)
    sign = '-' if value < 0 else ''
    num, den = abs(value.numerator), value.denominator
    whole, rem = divmod(num, den)
    digits = []
    while rem and len(digits) < places:
        digit, rem = divmod(rem * 10, den)
        digits.append(str(digit))
    text = f"{sign}{whole}"
    if digits:
        text += '.' + ''.join(digits)
    if rem:
        text += '...'
    return text


def describe(value: Fraction) -> str:
    """``6293/1000 (6.293)``"""
    return f"{fraction_str(value)} ({render_decimal(value)})"


def common_denominator(values: Iterable[Fraction]) -> int:
    denom = 1
    for value in values:
        denom = lcm(denom, Fraction(value).denominator)
    return denom


def scaled_ints(values: Iterable[Fraction], denom: int) -> Optional[np.ndarray]:
    """``values * denom`` as int64, or None when the scale would overflow."""
    scaled = []
    for value in values:
        product = Fraction(value) * denom
        if product.denominator != 1 or abs(product.numerator) >= INT_LIMIT:
            return None
        scaled.append(product.numerator)
    return np.array(scaled, dtype=np.int64)
