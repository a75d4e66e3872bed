"""Money and rational-number helpers shared across the package.

Money is carried everywhere as an integer count of minor currency units
(cents for USD) so that cost arithmetic is exact. Ratios that must survive
floor/ceil arithmetic bit-exactly (blocking factors, per-port metrics) are
carried as ``fractions.Fraction``.
"""

from __future__ import annotations

from decimal import Decimal, InvalidOperation
from fractions import Fraction

Money = int  # minor currency units

_CURRENCY_SYMBOLS = {"USD": "$", "EUR": "€", "GBP": "£"}


def format_money(amount: Money, currency: str = "USD") -> str:
    """Render minor units as a human-readable amount, e.g. 1100000 -> "$11,000"."""
    sign = "-" if amount < 0 else ""
    units, cents = divmod(abs(amount), 100)
    symbol = _CURRENCY_SYMBOLS.get(currency)
    prefix = f"{sign}{symbol}" if symbol else f"{sign}{currency} "
    if cents:
        return f"{prefix}{units:,}.{cents:02d}"
    return f"{prefix}{units:,}"


def parse_money(text: str) -> Money:
    """Parse a decimal amount in major units ("80", "80.25") into minor units."""
    try:
        value = Decimal(text)
    except InvalidOperation:
        raise ValueError(f"invalid money amount: {text!r}") from None
    cents = value * 100
    if cents != cents.to_integral_value():
        raise ValueError(f"money amount has sub-cent precision: {text!r}")
    return int(cents)


def parse_ratio(text: str) -> Fraction:
    """Parse "3" or "p/q" into a Fraction; decimal notation is rejected."""
    text = text.strip()
    if "." in text:
        raise ValueError(
            f"decimal ratios are ambiguous, use integers or p/q: {text!r}"
        )
    try:
        if "/" in text:
            num, den = text.split("/", 1)
            return Fraction(int(num), int(den))
        return Fraction(int(text))
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"invalid ratio: {text!r}") from None


def round_half_up(value: Fraction, quantum: Fraction = Fraction(1)) -> Fraction:
    """Round to the nearest multiple of ``quantum``, ties away from zero upward."""
    steps = (value / quantum + Fraction(1, 2)).__floor__()
    return steps * quantum


def fraction_text(value: Fraction, places: int = 2) -> str:
    """Render a Fraction as a short decimal string ("54", "8203.68")."""
    if value.denominator == 1:
        return f"{value.numerator:,}"
    quantized = (Decimal(value.numerator) / Decimal(value.denominator)).quantize(
        Decimal(1).scaleb(-places)
    )
    text = f"{quantized:,f}".rstrip("0").rstrip(".")
    return text
