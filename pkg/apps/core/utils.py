from fractions import Fraction
from numbers import Rational

from apps.core.exceptions import SpecificationError


def to_fraction(value) -> Fraction:
    """
    Parse an exact rational.

    Accepts ints, Fractions and strings of the form "p", "p/q" or "-p/q".
    Floats are rejected: nothing in the engine is allowed to round.
    """
    if isinstance(value, bool):
        raise SpecificationError(f"Expected a rational number, got {value!r}.")

    if isinstance(value, Rational):
        return Fraction(value)

    if isinstance(value, str):
        text = value.strip()
        if "." in text or "e" in text.lower():
            raise SpecificationError(
                f"Rationals must be written as 'p/q', got {value!r}."
            )
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise SpecificationError(f"Not a rational number: {value!r}.")

    raise SpecificationError(f"Expected a rational number, got {value!r}.")


def format_fraction(value) -> str:
    """Always 'p/q', with the denominator written even when it is 1."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def format_decimal(value, places: int) -> str:
    """
    Approximate rendering for `--decimal N`; marked with a leading '~'.
    Rounds half away from zero on the exact value.
    """
    value = Fraction(value)
    scale = 10 ** places
    scaled = abs(value) * scale
    rounded = int(scaled + Fraction(1, 2))
    sign = "-" if value < 0 and rounded else ""
    whole, frac = divmod(rounded, scale)
    if places == 0:
        return f"~{sign}{whole}"
    return f"~{sign}{whole}.{frac:0{places}d}"


def is_integral(value) -> bool:
    return Fraction(value).denominator == 1
