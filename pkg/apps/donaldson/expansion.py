import logging
from fractions import Fraction

from apps.core.exceptions import (
    DivisibilityError,
    IncompatibleClassError,
    SpecificationError,
    TruncationError,
)
from apps.donaldson.models import BlowupParity, FactorKind
from apps.series.algebra import (
    exact_divide,
    exp_like,
    exp_of_linear,
    linear_form,
    polarized_coefficient,
    quadratic_form,
)
from apps.series.models import ExpandedSeries
from apps.surfaces.utils import probe_frame, virtual_dim


logger = logging.getLogger(__name__)


def _pairings(series, frame):
    if frame.classes is None:
        raise SpecificationError("The probe frame carries no classes to pair with.")
    surface = series.surface
    for probe in frame.classes:
        if probe.basis != surface.basis:
            raise IncompatibleClassError(
                "Probe classes are not expressed in the series' surface basis.",
                probes=frame.names,
            )
    return lambda cls: [surface.pair(cls, probe) for probe in frame.classes]


def _factor(frame, kind, pairings):
    return exp_like(linear_form(frame, pairings), FactorKind(kind).value)


def _product_of(frame, factors, pair):
    result = ExpandedSeries.one(frame)
    for factor in factors:
        expanded = _factor(frame, factor.kind, pair(factor.cls))
        for _ in range(factor.power):
            result = result * expanded
    return result


def _quotient_order(series):
    """Order of the denominator: every sinh of a nonzero class has order 1."""
    return sum(q.power for q in series.quotient_terms if q.kind == FactorKind.SINH)


def expand(series, frame, truncation=None):
    """
    Exact expansion of a structured series on a probe frame to total degree
    `truncation` (the frame's own truncation by default).

    Quotients are expanded with their numerator at a raised truncation and
    divided out exactly.
    """
    D = frame.truncation if truncation is None else truncation
    pair = _pairings(series, frame)
    shift = _quotient_order(series)
    work = frame.with_truncation(D + shift)

    numerator = ExpandedSeries.constant(work, series.constant)
    if series.exp_terms:
        total = ExpandedSeries.zero(work)
        for term in series.exp_terms:
            total = total + exp_of_linear(work, pair(term.cls)).scale(term.coefficient)
        numerator = numerator * total
    numerator = _product_of(work, series.factor_terms, pair) * numerator
    if series.gaussian:
        numerator = numerator * exp_like(quadratic_form(work))

    if series.quotient_terms:
        denominator = _product_of(work, series.quotient_terms, pair)
        if denominator.is_zero() or denominator.order() != shift:
            raise DivisibilityError(
                "A quotient factor vanishes on this probe frame; choose probes that pair "
                "nontrivially with every divided class."
            )
        result = exact_divide(numerator, denominator)
    else:
        result = numerator

    logger.debug(
        "expanded %s on probes %s to D=%s: %s terms",
        series.metadata.get("source", "series"), list(frame.names), D, len(result.terms),
    )
    return result


def series_parity(surface, L):
    """Parity of every nonzero degree of q_L: L^2 + (b_+ + 1)/2 mod 2."""
    b_plus = 1 + 2 * surface.p_g
    return int(surface.self_int(L) + (b_plus + 1) // 2) % 2


def parity_violations(expanded, parity):
    return [d for d in expanded.degrees() if d % 2 != parity]


# ── evaluate ───────────────────────────────────────────────────────────────────

def evaluate(series, frame, request):
    """
    q_{L,k}(P_1^{m_1} ... P_j^{m_j}, x^b).

    x^b is reduced with q_{L,k}(..., x^b) = 4^{b//2} q_{L,k-b//2}(..., x^{b mod 2});
    the remaining value is read from the degree part of q_L with
    q_{L,k}(alpha) = q_d(alpha) and q_{L,k}(x, alpha) = 2 q_{d-2}(alpha).
    Returns 0 whenever the degrees do not add up to d(L,k).
    """
    exponents = [0] * frame.size
    for name, multiplicity in request.arguments:
        exponents[frame.index(name)] += multiplicity
    m = sum(exponents)
    b = request.point_power

    d = virtual_dim(series.surface, series.L, request.k)
    if m + 2 * b != d:
        logger.debug("evaluate: degree %s + 2*%s does not match d(L,k)=%s", m, b, d)
        return Fraction(0)
    if m > frame.truncation:
        raise TruncationError(
            f"Degree {m} exceeds the frame truncation {frame.truncation}.",
            degree=m,
        )

    expanded = expand(series, frame, truncation=m)
    value = polarized_coefficient(expanded, exponents)
    if b % 2:
        value *= 2
    return value * 4 ** (b // 2)


# ── Pulled-back reading of the blow-up formula ─────────────────────────────────

def push_down(base, blown_up, cls):
    """pi_* of a class on the blow-up: drop the coordinate of the new (-1)-curve."""
    coords = list(cls.coords)
    del coords[blown_up.basis.index(f"E{blown_up.r}")]
    return base.cls(coords)


def expand_pulled_back(series, blown_up, blown_frame, parity):
    """
    sinh(E) e^{-(E.x)^2/2} q_L(pi_* x) (odd) or cosh(E) e^{-(E.x)^2/2} q_L(pi_* x) (even),
    expanded on a frame of the blow-up. Built without blowup_transform, for
    comparing against it.
    """
    base = series.surface
    E = blown_up.exceptional(blown_up.r)
    pushed = probe_frame(
        base,
        [(name, push_down(base, blown_up, cls)) for name, cls in zip(blown_frame.names, blown_frame.classes)],
        blown_frame.truncation,
    )
    base_expansion = ExpandedSeries(blown_frame, expand(series, pushed).terms)

    ell_E = [blown_up.pair(E, probe) for probe in blown_frame.classes]
    kind = FactorKind.SINH if parity == BlowupParity.ODD else FactorKind.COSH
    line = linear_form(blown_frame, ell_E)
    correction = exp_like((line * line).scale(Fraction(-1, 2)))
    return _factor(blown_frame, kind, ell_E) * correction * base_expansion
