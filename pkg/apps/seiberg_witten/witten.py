from fractions import Fraction

from apps.core.exceptions import InconsistentInvariantsError
from apps.surfaces.utils import char_numbers


def witten_exponent_from(e: int, sigma: int) -> int:
    """2 + (7e + 11 sigma)/4, which must be an integer."""
    if (7 * e + 11 * sigma) % 4:
        raise InconsistentInvariantsError(
            f"7e + 11 sigma = {7 * e + 11 * sigma} is not divisible by 4."
        )
    return 2 + (7 * e + 11 * sigma) // 4


def witten_exponent(surface) -> int:
    numbers = char_numbers(surface)
    return witten_exponent_from(numbers.e, numbers.sigma)


def witten_factor(surface) -> Fraction:
    """km(X,K) / sw(X,K) = 2^{2 + (7e + 11 sigma)/4}; below 1 once X is blown up enough."""
    return Fraction(2) ** witten_exponent(surface)


def minimal_witten_factor(surface) -> Fraction:
    """The factor of the minimal model: each blow-up halves it."""
    return witten_factor(surface) * 2 ** surface.r
