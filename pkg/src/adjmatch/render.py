"""Decimal rendering of exact rationals (round half to even, no locale)."""

from __future__ import annotations

from fractions import Fraction


def format_fixed(value: Fraction | int, places: int = 5) -> str:
    """Render ``value`` with exactly ``places`` digits after the point.

    >>> format_fixed(Fraction(1, 3), 5)
    '0.33333'
    >>> format_fixed(Fraction(1, 8), 2)
    '0.12'
    """
    if places < 0:
        raise ValueError("places must be non-negative")
    scaled = round(Fraction(value) * 10**places)  # Fraction.__round__ is half-even
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled)).rjust(places + 1, "0")
    if places == 0:
        return sign + digits
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def _floor_log10(x: Fraction) -> int:
    # digit-length estimate, then correct by at most one step either way
    e = len(str(x.numerator)) - len(str(x.denominator))
    while Fraction(10) ** e > x:
        e -= 1
    while Fraction(10) ** (e + 1) <= x:
        e += 1
    return e


def format_sci(value: Fraction | int, sig: int = 6) -> str:
    """Scientific notation with ``sig`` significant figures, e.g. ``6.76672e-41``."""
    x = Fraction(value)
    if sig < 1:
        raise ValueError("sig must be at least 1")
    if x == 0:
        return "0." + "0" * (sig - 1) + "e+00" if sig > 1 else "0e+00"
    sign = "-" if x < 0 else ""
    x = abs(x)
    e = _floor_log10(x)
    mantissa = round(x / Fraction(10) ** (e - sig + 1))
    if mantissa == 10**sig:
        mantissa //= 10
        e += 1
    digits = str(mantissa)
    body = digits[0] + ("." + digits[1:] if sig > 1 else "")
    return f"{sign}{body}e{e:+03d}"


def format_fraction(value: Fraction | int) -> str:
    """``'48/17'`` for non-integers, ``'3'`` for integers."""
    x = Fraction(value)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
