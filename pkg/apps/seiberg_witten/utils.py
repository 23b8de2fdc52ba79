"""
Seiberg-Witten basic classes of regular surfaces with p_g > 0 and their
Donaldson (Kronheimer-Mrowka) multiplicities.
"""
import logging
from fractions import Fraction
from itertools import product
from math import comb

from apps.core.exceptions import (
    CharacteristicViolationError,
    InconsistentInvariantsError,
    UnsupportedSurfaceError,
)
from apps.core.utils import is_integral
from apps.seiberg_witten.models import BasicClass, merged_multiplicities
from apps.seiberg_witten.witten import witten_factor
from apps.surfaces.utils import char_numbers


logger = logging.getLogger(__name__)


def basic_classes_elliptic(surface):
    """
    K = -K_X + 2(dF + sum_i a_i F_i), 0 <= d <= p_g - 1, 0 <= a_i <= p_i - 1,
    with sw(K) = (-1)^d binom(p_g - 1, d).

    One entry per tuple (d, a_1, ..., a_n), labelled by it. Tuples that land
    on the same class stay separate; assemble_structure sums them.
    """
    if not surface.is_elliptic:
        raise UnsupportedSurfaceError("basic_classes_elliptic needs an elliptic surface.")
    if not surface.is_minimal:
        raise UnsupportedSurfaceError("Basic classes are enumerated on the minimal elliptic surface only.")

    multiplicities = surface.data.multiplicities
    F = surface.fiber()
    fibres = [surface.multiple_fiber(i) for i in range(1, len(multiplicities) + 1)]
    K_X = surface.canonical_class()
    factor = witten_factor(surface)

    basics = []
    for d in range(surface.p_g):
        sw = Fraction((-1) ** d * comb(surface.p_g - 1, d))
        for choice in product(*(range(p) for p in multiplicities)):
            vertical = F * d
            for a, F_i in zip(choice, fibres):
                vertical = vertical + F_i * a
            basics.append(BasicClass(
                cls=-K_X + vertical * 2, sw=sw, km=factor * sw, label=(d,) + choice,
            ))

    logger.debug(
        "elliptic enumeration: %s tuples on %s classes for p_g=%s, multiplicities=%s",
        len(basics), len({b.cls for b in basics}), surface.p_g, list(multiplicities),
    )
    return sorted(basics, key=BasicClass.sort_key)


def basic_classes_general_type(surface, L):
    """
    The 2^{r+1} classes +-K_min +- sum E_i. Multiplicities are read off the
    closed form of the Donaldson series: its exponential coefficients divided
    by the structure-theorem sign give km, and sw = km / Witten factor.
    """
    from apps.donaldson.builders import closed_form_general_type, exponential_terms, sign_exponent

    if not surface.is_general_type:
        raise UnsupportedSurfaceError("basic_classes_general_type needs a surface of general type.")

    series = closed_form_general_type(surface, L)
    factor = witten_factor(surface)
    basics = []
    for term in exponential_terms(series):
        sign = -1 if sign_exponent(surface, L, term.cls) % 2 else 1
        km = term.coefficient * sign
        basics.append(BasicClass(cls=term.cls, sw=km / factor, km=km))

    expected = 2 ** (surface.r + 1)
    if len(basics) != expected:
        raise InconsistentInvariantsError(
            f"Expected {expected} basic classes, found {len(basics)}."
        )
    return sorted(basics, key=BasicClass.sort_key)


def basic_classes(surface, L=None):
    if surface.is_elliptic:
        return basic_classes_elliptic(surface)
    return basic_classes_general_type(surface, L if L is not None else surface.zero())


def check_simple_type(surface, basics):
    """Every basic class has K^2 = 2e + 3 sigma."""
    numbers = char_numbers(surface)
    target = 2 * numbers.e + 3 * numbers.sigma
    for basic in basics:
        square = surface.self_int(basic.cls)
        if square != target:
            raise InconsistentInvariantsError(
                f"Basic class {basic.cls.describe()} has K^2 = {square}, expected {target}."
            )


def check_characteristic(surface, cls):
    """
    K.x = x.x mod 2 on the basis classes where this is decidable: the
    (-1)-curves, and K_min on a surface of general type.
    """
    checked = surface.exceptionals()
    if surface.is_general_type:
        checked = [surface.primary()] + checked
    for x in checked:
        value = surface.pair(cls, x) - surface.self_int(x)
        if not is_integral(value) or value % 2:
            raise CharacteristicViolationError(
                f"{cls.describe()} is not characteristic: pairing with {x.describe()} has the wrong parity."
            )


def check_pairing_symmetry(basics):
    """For every class K the class -K is present with sw(-K) = +-sw(K), after summing tuples."""
    table = merged_multiplicities(basics)
    for cls, sw in table.items():
        partner = table.get(-cls)
        if partner is None or abs(partner) != abs(sw):
            raise InconsistentInvariantsError(
                f"Basic class {cls.describe()} has no partner -K with matching multiplicity."
            )
