"""
Builders for structured Donaldson series: the structure-theorem assembly
from basic classes, the closed forms for surfaces of general type and for
elliptic surfaces over P1, and the blow-up transform.
"""
import logging
from fractions import Fraction
from itertools import product

from apps.core.exceptions import (
    CharacteristicViolationError,
    UnsupportedClassError,
    UnsupportedOperationError,
    UnsupportedSurfaceError,
)
from apps.core.utils import is_integral
from apps.donaldson.models import (
    CONVENTIONS,
    BlowupParity,
    ExpTerm,
    FactorKind,
    SeriesFactor,
    StructuredSeries,
)
from apps.seiberg_witten.witten import minimal_witten_factor, witten_factor
from apps.surfaces.utils import blow_up, decompose_L


logger = logging.getLogger(__name__)


def _metadata(surface, L, source, **extra):
    meta = {
        "source": source,
        "surface_text": str(surface),
        "L_text": L.describe(),
        "conventions": dict(CONVENTIONS),
    }
    meta.update(extra)
    return meta


def sign_exponent(surface, L, K):
    """(L^2 + K.L)/2, which must be an integer for a characteristic K."""
    value = (surface.self_int(L) + surface.pair(K, L)) / 2
    if not is_integral(value):
        raise CharacteristicViolationError(
            f"L^2 + K.L is odd for K = {K.describe()}, L = {L.describe()}."
        )
    return int(value)


def _merge_terms(terms):
    merged = {}
    for coefficient, cls in terms:
        merged[cls] = merged.get(cls, 0) + coefficient
    return tuple(
        ExpTerm(coefficient=Fraction(c), cls=cls)
        for cls, c in sorted(merged.items(), key=lambda item: item[0].coords)
        if c
    )


# ── assemble_structure ─────────────────────────────────────────────────────────

def assemble_structure(surface, L, basics):
    """q_L = e^{Q/2} sum_i (-1)^{(L^2 + K_i.L)/2} km(K_i) e^{K_i}."""
    terms = []
    for basic in basics:
        sign = -1 if sign_exponent(surface, L, basic.cls) % 2 else 1
        terms.append((sign * basic.km, basic.cls))
    logger.debug("assembled %s basic classes on %s", len(terms), surface)
    return StructuredSeries(
        surface=surface,
        L=L,
        constant=1,
        exp_terms=_merge_terms(terms),
        metadata=_metadata(surface, L, "structure_theorem", basic_classes=len(terms)),
    )


# ── closed_form_general_type ───────────────────────────────────────────────────

def closed_form_general_type(surface, L):
    """
    q_L = q0 e^{Q/2} (e^{-K_min} + s e^{K_min}) prod_{L.E_i odd} sinh(E_i) prod_{L.E_i even} cosh(E_i)

    with s = (-1)^{1 + p_g + L_min^2} and
    q0 = (-1)^{(L_min^2 - K_min.L_min)/2} 2^{2 + (7e + 11 sigma)(X_min)/4}

    for L = L_min - sum_{L.E_i odd} E_i, so that L.E_i = 1 on the sinh factors.
    """
    if not surface.is_general_type:
        raise UnsupportedSurfaceError("closed_form_general_type needs a surface of general type.")

    decomposition = decompose_L(surface, L)
    L_min = decomposition.L_min
    K_min = surface.primary()

    L_min_sq = surface.self_int(L_min)
    half = (L_min_sq - surface.pair(K_min, L_min)) / 2
    if not is_integral(half):
        raise CharacteristicViolationError(
            f"(L_min^2 - K_min.L_min)/2 = {half} is not an integer."
        )
    # The closed form holds for L_min - sum_{odd} E_i; other lifts differ by
    # 2x with x = sum c_i E_i, and q_{L+2x} = (-1)^{x.x} q_L.
    shift = 0
    for i, E in enumerate(surface.exceptionals(), start=1):
        shift += ((1 if i in decomposition.odd_indices else 0) - int(surface.pair(L, E))) // 2
    q0 = (-1) ** int((half + shift) % 2) * minimal_witten_factor(surface)
    s = -1 if (1 + surface.p_g + int(L_min_sq)) % 2 else 1

    factors = []
    divisors = []
    for i, E in enumerate(surface.exceptionals(), start=1):
        if i in decomposition.odd_indices:
            factors.append(SeriesFactor(FactorKind.SINH, E))
            divisors.append(E)
        else:
            factors.append(SeriesFactor(FactorKind.COSH, E))

    logger.debug(
        "general type closed form: q0=%s s=%s odd=%s on %s",
        q0, s, sorted(decomposition.odd_indices), surface,
    )
    return StructuredSeries(
        surface=surface,
        L=L,
        constant=q0,
        exp_terms=(ExpTerm(Fraction(1), -K_min), ExpTerm(Fraction(s), K_min)),
        factor_terms=factors,
        divisor_factors=divisors,
        metadata=_metadata(
            surface, L, "closed_form_general_type",
            L_min=L_min.describe(), odd_count=decomposition.odd_count, bracket_sign=s,
        ),
    )


# ── closed_form_elliptic ───────────────────────────────────────────────────────

def _is_vertical(surface, L):
    return all(not c for name, c in zip(surface.basis, L.coords) if name != surface.primary_name)


def elliptic_constant(surface):
    """2^{2 + (7e + 11 sigma)/4 + (p_g - 1)}."""
    return witten_factor(surface) * 2 ** (surface.p_g - 1)


def closed_form_elliptic(surface, L):
    """
    q_L = c e^{Q/2} sinh^{p_g - 1 + n}(-F) / prod_i sinh(-F_i)

    stored alongside its quotient-free form

    c e^{Q/2} sinh^{p_g - 1}(-F) prod_i sum_{a=0}^{p_i - 1} e^{(2a - p_i + 1)(-F_i)}.
    """
    if not surface.is_elliptic:
        raise UnsupportedSurfaceError("closed_form_elliptic needs an elliptic surface.")
    if not surface.is_minimal:
        raise UnsupportedSurfaceError(
            "closed_form_elliptic works on the minimal surface; use blowup_transform for blow-ups."
        )
    if not _is_vertical(surface, L):
        raise UnsupportedClassError("L must be a vertical divisor, a rational multiple of F.")

    F = surface.fiber()
    multiplicities = surface.data.multiplicities
    fibres = [surface.multiple_fiber(i) for i in range(1, len(multiplicities) + 1)]
    constant = elliptic_constant(surface)
    divisors = [F] * (surface.p_g - 1)

    ratio_power = surface.p_g - 1 + len(multiplicities)
    ratio_factors = [SeriesFactor(FactorKind.SINH, -F, ratio_power)] if ratio_power else []
    quotients = [SeriesFactor(FactorKind.SINH, -F_i) for F_i in fibres]

    terms = [(Fraction(1), surface.zero())]
    for p, F_i in zip(multiplicities, fibres):
        terms = [
            (c, cls + F_i * -(2 * a - p + 1))
            for c, cls in terms
            for a in range(p)
        ]
    exp_terms = _merge_terms(terms) if multiplicities else ()
    sum_factors = (
        [SeriesFactor(FactorKind.SINH, -F, surface.p_g - 1)] if surface.p_g > 1 else []
    )

    exponential_form = StructuredSeries(
        surface=surface,
        L=L,
        constant=constant,
        exp_terms=exp_terms,
        factor_terms=sum_factors,
        divisor_factors=divisors,
        metadata=_metadata(surface, L, "closed_form_elliptic.exponential_sum"),
    )
    logger.debug(
        "elliptic closed form: constant=%s ratio power=%s quotients=%s",
        constant, ratio_power, len(quotients),
    )
    return StructuredSeries(
        surface=surface,
        L=L,
        constant=constant,
        factor_terms=ratio_factors,
        quotient_terms=quotients,
        divisor_factors=divisors,
        exponential_form=exponential_form,
        metadata=_metadata(surface, L, "closed_form_elliptic"),
    )


def closed_form(surface, L):
    if surface.is_elliptic:
        return closed_form_elliptic(surface, L)
    return closed_form_general_type(surface, L)


# ── blowup_transform ───────────────────────────────────────────────────────────

def _lift_series(series, blown_up, factor, divisor, L):
    surface = series.surface
    lifted_form = None
    if series.exponential_form is not None:
        lifted_form = _lift_series(series.exponential_form, blown_up, factor, divisor, L)
    metadata = dict(series.metadata)
    metadata.update(surface_text=str(blown_up), L_text=L.describe(), source=f"blowup({metadata.get('source')})")
    return StructuredSeries(
        surface=blown_up,
        L=L,
        constant=series.constant,
        gaussian=series.gaussian,
        exp_terms=[term.lifted(surface) for term in series.exp_terms],
        factor_terms=[f.lifted(surface) for f in series.factor_terms] + [factor],
        quotient_terms=[q.lifted(surface) for q in series.quotient_terms],
        divisor_factors=[surface.lift(c) for c in series.divisor_factors] + ([divisor] if divisor else []),
        exponential_form=lifted_form,
        metadata=metadata,
    )


def blowup_transform(series, parity, exceptional_sign=-1):
    """
    The series of the blow-up in the class L - E (odd, so L.E = 1) or L (even):
    multiply by sinh(E) or cosh(E); e^{Q/2} now refers to the blown-up form,
    which accounts for the e^{-E.E/2} correction.

    exceptional_sign=+1 takes the odd lift L + E instead, whose factor is
    sinh(-E) = -sinh(E).
    """
    if not series.gaussian:
        raise UnsupportedOperationError("The blow-up transform needs the e^{Q/2} factor.")
    if parity not in BlowupParity.values:
        raise UnsupportedOperationError(f"Unknown blow-up parity {parity!r}.")
    if exceptional_sign not in (1, -1):
        raise UnsupportedOperationError("The exceptional sign must be +1 or -1.")

    surface = series.surface
    blown_up = blow_up(surface)
    E = blown_up.exceptional(blown_up.r)
    L = surface.lift(series.L)

    if parity == BlowupParity.ODD:
        L = L + E * exceptional_sign
        factor = SeriesFactor(FactorKind.SINH, E * -exceptional_sign)
        divisor = E
    else:
        factor = SeriesFactor(FactorKind.COSH, E)
        divisor = None

    logger.debug("blow-up (%s) of %s", parity, surface)
    return _lift_series(series, blown_up, factor, divisor, L)


# ── Exponential expansion of a factorization ──────────────────────────────────

def _factor_terms(factor):
    half = Fraction(1, 2)
    if factor.kind == FactorKind.SINH:
        return [(half, factor.cls), (-half, -factor.cls)]
    if factor.kind == FactorKind.COSH:
        return [(half, factor.cls), (half, -factor.cls)]
    return [(Fraction(1), factor.cls)]


def exponential_terms(series):
    """
    constant * (sum c_i e^{K_i}) * prod factors rewritten as sum_j c_j e^{K_j},
    leaving out the Gaussian.
    """
    if series.has_quotients:
        if series.exponential_form is None:
            raise UnsupportedOperationError("Quotients have no finite exponential expansion.")
        return exponential_terms(series.exponential_form)

    surface = series.surface
    pieces = [[(term.coefficient, term.cls) for term in series.exp_terms] or [(Fraction(1), surface.zero())]]
    for factor in series.factor_terms:
        pieces.extend([_factor_terms(factor)] * factor.power)

    terms = []
    for choice in product(*pieces):
        coefficient = series.constant
        cls = surface.zero()
        for c, x in choice:
            coefficient *= c
            cls = cls + x
        terms.append((coefficient, cls))
    return _merge_terms(terms)
