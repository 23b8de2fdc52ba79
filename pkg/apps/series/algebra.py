import logging
from math import factorial

from sympy.polys.polyerrors import ExactQuotientFailed
from sympy.polys.ring_series import rs_cosh, rs_exp, rs_sinh

from apps.core.exceptions import (
    DimensionError,
    DivisibilityError,
    IncompatibleFrameError,
    NotNilpotentError,
    SpecificationError,
    TruncationError,
)
from apps.core.utils import to_fraction
from apps.series.models import ExpandedSeries, monomial_product


logger = logging.getLogger(__name__)


EXP = "exp"
SINH = "sinh"
COSH = "cosh"
EXP_KINDS = (EXP, SINH, COSH)

_SERIES_FUNCTIONS = {EXP: rs_exp, SINH: rs_sinh, COSH: rs_cosh}


# ── Building blocks ────────────────────────────────────────────────────────────

def linear_form(frame, pairings):
    """The degree-1 series sum_j pairings[j] * t_j."""
    pairings = list(pairings)
    if len(pairings) != frame.size:
        raise DimensionError(
            f"Expected {frame.size} pairings, got {len(pairings)}.",
            probes=frame.names,
        )
    terms = {
        frame.unit(j): to_fraction(value)
        for j, value in enumerate(pairings)
    }
    return ExpandedSeries(frame, terms)


def quadratic_form(frame):
    """The degree-2 series Q/2 = 1/2 * sum_{i,j} (P_i.P_j) t_i t_j."""
    terms = {}
    for i in range(frame.size):
        for j in range(i, frame.size):
            value = frame.pairing(i, j)
            if not value:
                continue
            monomial = monomial_product(frame.unit(i), frame.unit(j))
            # Off-diagonal pairs appear twice in the double sum.
            terms[monomial] = value / 2 if i == j else value
    return ExpandedSeries(frame, terms)


def exp_of_linear(frame, pairings):
    """exp(sum_j c_j t_j)."""
    return exp_like(linear_form(frame, pairings), EXP)


# ── ring_ops ───────────────────────────────────────────────────────────────────

def add(a, b):
    return a + b


def multiply(a, b):
    return a * b


def scalar_multiple(a, factor):
    return a.scale(factor)


def product(frame, factors):
    result = ExpandedSeries.one(frame)
    for factor in factors:
        result = result * factor
    return result


def power(series, exponent):
    if exponent < 0:
        raise SpecificationError("Negative powers are not series.")
    result = ExpandedSeries.one(series.frame)
    for _ in range(exponent):
        result = result * series
    return result


# ── exp_like ───────────────────────────────────────────────────────────────────

def exp_like(series, kind=EXP):
    """
    exp, sinh or cosh of a series without constant term, truncated at the
    series' own truncation.
    """
    if kind not in EXP_KINDS:
        raise SpecificationError(f"Unknown function {kind!r}; expected one of {EXP_KINDS}.")
    if series.constant_term():
        raise NotNilpotentError(
            f"{kind} needs a series without constant term.",
            constant=series.constant_term(),
        )

    frame = series.frame
    if series.is_zero():
        return ExpandedSeries.zero(frame) if kind == SINH else ExpandedSeries.one(frame)
    function = _SERIES_FUNCTIONS[kind]
    return ExpandedSeries.from_poly(
        frame, function(series.poly, frame.degree_generator, frame.truncation + 1)
    )


# ── exact_divide ───────────────────────────────────────────────────────────────

def exact_divide(numerator, denominator):
    """
    q with q * denominator = numerator, truncated at D - ord(denominator).

    Works degree by degree against the lowest homogeneous part of the
    denominator; each homogeneous quotient is an exact polynomial division.
    """
    if not numerator.frame.same_probes(denominator.frame) or (
        numerator.truncation != denominator.truncation
    ):
        raise IncompatibleFrameError("Numerator and denominator live on different frames.")
    if denominator.is_zero():
        raise DivisibilityError("Division by a series that vanishes up to truncation.")

    frame = numerator.frame
    zero = frame.ring.zero
    m = denominator.order()
    limit = frame.truncation - m
    num_parts = numerator.graded_parts()
    den_parts = denominator.graded_parts()
    lowest = den_parts[m]

    for degree in num_parts:
        if degree < m:
            raise DivisibilityError(
                f"Numerator has terms in degree {degree} below the order {m} of the denominator."
            )

    quotient_parts = []
    for j in range(limit + 1):
        rhs = num_parts.get(m + j, zero)
        for i, q_i in enumerate(quotient_parts):
            d_part = den_parts.get(m + j - i)
            if d_part is not None and q_i:
                rhs = rhs - q_i * d_part
        try:
            q_j = rhs.exquo(lowest) if rhs else zero
        except ExactQuotientFailed:
            raise DivisibilityError(
                f"Division is not exact in degree {m + j}.",
                degree=m + j,
            )
        quotient_parts.append(q_j)

    logger.debug(
        "exact_divide: order %s, output truncation %s, %s probes",
        m, limit, frame.size,
    )
    return ExpandedSeries.from_poly(frame.with_truncation(limit), sum(quotient_parts, zero))


# ── Grading ────────────────────────────────────────────────────────────────────

def homogeneous_part(series, degree):
    return series.homogeneous_part(degree)


def order(series):
    return series.order()


def polarized_coefficient(series, exponents):
    """
    q_d(P_1^{a_1} ... P_k^{a_k}) = (prod_j a_j!) * [t^a] series.
    """
    exponents = tuple(exponents)
    if len(exponents) != series.frame.size:
        raise DimensionError(
            f"Expected {series.frame.size} exponents, got {len(exponents)}."
        )
    if any(not isinstance(a, int) or a < 0 for a in exponents):
        raise DimensionError("Exponents must be non-negative integers.")
    if sum(exponents) > series.truncation:
        raise TruncationError(
            f"Degree {sum(exponents)} exceeds the truncation {series.truncation}.",
            degree=sum(exponents),
        )
    weight = 1
    for a in exponents:
        weight *= factorial(a)
    return weight * series.coefficient(exponents)
