"""
Numerical consequences of the Donaldson series for moduli of sheaves:
existence of semistable bundles, the wall check and the generic rank of the
canonical two-form.
"""
import logging
from fractions import Fraction
from math import factorial

from apps.analysis.models import (
    LOWER_BOUND_ASSUMPTION,
    EXISTENCE_ASSUMPTIONS,
    CaseMod4,
    ExistenceReport,
    Specialization,
    TauCertificate,
    TauRankReport,
    WallVerdict,
)
from apps.core.exceptions import (
    CheckFailedError,
    DegreeBookkeepingError,
    SpecificationError,
    UnsupportedOperationError,
)
from apps.core.utils import is_integral
from apps.donaldson.builders import blowup_transform, closed_form
from apps.donaldson.expansion import evaluate, expand
from apps.donaldson.models import BlowupParity, EvalRequest, FactorKind
from apps.surfaces.models import POLARIZATION, PROBE_W, ClassKind
from apps.surfaces.utils import (
    admissible_k,
    basis_frame,
    blow_up,
    integral_square,
    odd_count,
    probe_frame,
    virtual_dim,
    with_probe_weight,
)


logger = logging.getLogger(__name__)


# ── existence_bound ────────────────────────────────────────────────────────────

def _specialization(surface):
    if surface.is_general_type:
        return Specialization.GENERAL_TYPE
    if surface.is_elliptic:
        return Specialization.ELLIPTIC
    return Specialization.GENERIC


def existence_bound(surface, L, truncation):
    """
    With n = ord q_L there is a k with d(L,k) <= n + 2 and a semistable
    bundle of class (L, k): d = n when -L^2 - 3(1 + p_g) = n mod 4, else n + 2.
    """
    series = closed_form(surface, L)
    expanded = expand(series, basis_frame(surface, truncation))
    n = expanded.order()

    residue = (-integral_square(surface, L) - 3 * (1 + surface.p_g)) % 4
    if residue == n % 4:
        case, d_upper = CaseMod4.ORDER, n
    else:
        case, d_upper = CaseMod4.ORDER_PLUS_TWO, n + 2

    specialization = _specialization(surface)
    d_lower = None
    assumptions = EXISTENCE_ASSUMPTIONS
    if surface.is_general_type:
        odd = odd_count(surface, L)
        closed_bound = odd + 3
        d_lower = odd - 3 * (1 + surface.p_g)
        assumptions = assumptions + (LOWER_BOUND_ASSUMPTION,)
    else:
        closed_bound = len(surface.data.multiplicities) + surface.p_g - 1

    within = d_upper <= closed_bound
    if not within:
        logger.warning(
            "d_upper=%s exceeds the closed bound %s on %s", d_upper, closed_bound, surface,
        )

    blown_up = blowup_transform(series, BlowupParity.ODD)
    after = expand(blown_up, basis_frame(blown_up.surface, truncation + 1)).order()

    return ExistenceReport(
        order_n=n,
        d_upper=d_upper,
        k_at_bound=admissible_k(surface, L, d_upper),
        case_mod4=case,
        specialization=specialization,
        closed_bound=closed_bound,
        within_closed_bound=within,
        d_lower_remark=d_lower,
        order_after_blowup=after,
        assumptions=assumptions,
    )


# ── wall_check ─────────────────────────────────────────────────────────────────

def wall_check(surface, H, L):
    """good when H is integral and H.L is odd; otherwise nothing is decided."""
    value = surface.pair(H, L)
    if H.is_integral() and is_integral(value) and value % 2:
        return WallVerdict.GOOD
    return WallVerdict.UNKNOWN


def odd_polarization_on_blowup(surface, L, lam=1):
    """
    On the blow-up, H' = 2 lam H - E and L' = L - E give H'.L' = 2 lam H.L - 1.
    Returns (blown-up surface, L', wall verdict).
    """
    if not isinstance(lam, int) or lam < 1:
        raise SpecificationError("lam must be a positive integer.")
    blown_up = blow_up(
        surface,
        h_new_pairing=1,
        h_square=4 * lam * lam * surface.h_square - 1,
        h_scale=2 * lam,
    )
    L_tilde = surface.lift(L) - blown_up.exceptional(blown_up.r)
    return blown_up, L_tilde, wall_check(blown_up, blown_up.polarization(), L_tilde)


# ── tau_certificate ────────────────────────────────────────────────────────────

def _leading_data(series, canonical=False):
    """
    The nonzero constant q0 and the divisors C_1..C_e with
    q_L = q0 prod_i (C_i . x) e^{Q/2} + (terms of order > e in the algebraic classes).
    """
    form = series.exponential_form or series
    if form.has_quotients:
        raise UnsupportedOperationError("The leading term needs a quotient-free form.")

    divisors = list(form.divisor_factors)
    q0 = form.constant
    sign = 1
    remaining = list(divisors)
    for factor in form.factor_terms:
        if factor.kind != FactorKind.SINH:
            continue
        for _ in range(factor.power):
            if factor.cls in remaining:
                remaining.remove(factor.cls)
            elif -factor.cls in remaining:
                remaining.remove(-factor.cls)
                sign = -sign
            else:
                raise DegreeBookkeepingError(
                    f"sinh({factor.cls.describe()}) is not a tracked divisor factor."
                )

    coefficients = [term.coefficient for term in form.exp_terms] or [Fraction(1)]
    if not canonical:
        bracket = sum(coefficients)
    else:
        # The bracket vanishes at the origin; its linear part is a multiple of K_min.
        K_min = series.surface.primary()
        bracket = Fraction(0)
        for term in form.exp_terms:
            if term.cls == K_min:
                bracket += term.coefficient
            elif term.cls == -K_min:
                bracket -= term.coefficient
            else:
                raise UnsupportedOperationError("Only the general-type bracket has a canonical divisor.")
        divisors.append(K_min)

    return q0 * sign * bracket, divisors


def certificate_constant(d, e):
    """(d - e)! e! / ((d - e)/2)!"""
    return Fraction(factorial(d - e) * factorial(e), factorial((d - e) // 2))


def tau_certificate(surface, L, k, w=None, H=None, canonical=False):
    """
    value = q_{L,k}(W^{d-e}, H^e), nonzero and equal to
    q0 (prod H.C_i) (w/2)^{(d-e)/2} (d-e)! e! / ((d-e)/2)!;
    vanishing = q_{L,k}(W^{d-e+2}, H^{e-2}), exactly 0 (None when e < 2).
    """
    surface = with_probe_weight(surface, surface.w if w is None else w)
    H = surface.polarization() if H is None else H
    if H.kind != ClassKind.ALGEBRAIC:
        raise SpecificationError("H must be an algebraic class.")

    series = closed_form(surface, L)
    q0, divisors = _leading_data(series, canonical=canonical)
    e = len(divisors)
    d = virtual_dim(surface, L, k)
    if (d - e) % 2:
        raise DegreeBookkeepingError(
            f"d(L,k) = {d} and e = {e} have different parity.", d=d, e=e,
        )
    if d < e:
        raise DegreeBookkeepingError(f"d(L,k) = {d} is below the number of divisors e = {e}.")

    frame = probe_frame(surface, [(PROBE_W, surface.probe_w()), (POLARIZATION, H)], d)
    value = evaluate(series, frame, EvalRequest(((PROBE_W, d - e), (POLARIZATION, e)), 0, k))
    vanishing = None
    if e >= 2:
        vanishing = evaluate(
            series, frame, EvalRequest(((PROBE_W, d - e + 2), (POLARIZATION, e - 2)), 0, k)
        )

    expected = q0 * (surface.w / 2) ** ((d - e) // 2) * certificate_constant(d, e)
    for C in divisors:
        expected *= surface.pair(H, C)

    logger.debug("tau certificate on %s: d=%s e=%s value=%s", surface, d, e, value)
    return TauCertificate(value=value, vanishing=vanishing, expected=expected, divisors=tuple(divisors))


# ── tau_rank ───────────────────────────────────────────────────────────────────

def tau_rank(surface, L, k, w=None, H=None):
    """
    tau(omega)^n != 0 exactly for n <= floor((d(L,k) - e)/2), e the number of
    effective divisor factors of q_L.
    """
    series = closed_form(surface, L)
    e = len(series.divisor_factors)
    d = virtual_dim(surface, L, k)
    degenerate = d < e
    rank = max((d - e) // 2, 0)

    if surface.is_elliptic and not degenerate and rank != 2 * k - 2 * surface.p_g - 1:
        raise CheckFailedError(
            f"Elliptic rank {rank} differs from 2k - 2p_g - 1 = {2 * k - 2 * surface.p_g - 1}."
        )

    blown_up = blowup_transform(series, BlowupParity.ODD)
    d_blown = virtual_dim(blown_up.surface, blown_up.L, k)
    rank_after = max((d_blown - len(blown_up.divisor_factors)) // 2, 0)

    certificate = None
    if not degenerate:
        # On general type with L_min^2 + 1 + p_g odd the bracket itself vanishes
        # at the origin and contributes K_min as one more divisor.
        canonical = surface.is_general_type and (d - e) % 2 == 1
        certificate = tau_certificate(surface, L, k, w=w, H=H, canonical=canonical)

    return TauRankReport(
        e_divisors=e,
        d=d,
        rank=rank,
        certificate_value=certificate.value if certificate else None,
        certificate_vanishing=certificate.vanishing if certificate else None,
        certificate_expected=certificate.expected if certificate else None,
        degenerate=degenerate,
        rank_after_blowup=rank_after,
        divisors=tuple(C.describe() for C in series.divisor_factors),
    )
