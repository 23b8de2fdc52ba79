"""
Cross-representation oracles run by `invariants ... --check`.
Each returns a list of CheckResult; nothing here raises on a failed check.
"""
from apps.core.exceptions import EngineError
from apps.donaldson.builders import assemble_structure, closed_form, closed_form_general_type
from apps.donaldson.expansion import (
    evaluate,
    expand,
    expand_pulled_back,
    parity_violations,
    series_parity,
)
from apps.donaldson.models import EvalRequest
from apps.jobs.models import CheckResult
from apps.seiberg_witten.utils import (
    basic_classes,
    check_characteristic,
    check_pairing_symmetry,
    check_simple_type,
)
from apps.seiberg_witten.witten import witten_exponent, witten_factor
from apps.surfaces.utils import char_numbers, virtual_dim, virtual_dim_from_b_plus


def _guarded(name, predicate, detail=""):
    try:
        passed = bool(predicate())
    except EngineError as exc:
        return CheckResult(name, False, str(exc))
    return CheckResult(name, passed, detail)


def _raises_nothing(call):
    def run():
        call()
        return True
    return run


# ── sw ─────────────────────────────────────────────────────────────────────────

def check_sw(surface, L, basics, factor):
    numbers = char_numbers(surface)
    results = [
        _guarded(
            "km = witten_factor * sw",
            lambda: all(b.km == factor * b.sw for b in basics),
        ),
        _guarded("+-K symmetry", _raises_nothing(lambda: check_pairing_symmetry(basics))),
        _guarded("simple type K^2 = 2e + 3sigma", _raises_nothing(lambda: check_simple_type(surface, basics))),
        _guarded(
            "characteristic classes",
            _raises_nothing(lambda: [check_characteristic(surface, b.cls) for b in basics]),
        ),
        _guarded(
            "2 + (7e + 11sigma)/4 = 2 + K^2 - chi",
            lambda: witten_exponent(surface) == 2 + numbers.K_sq - numbers.chi,
            f"exponent {witten_exponent(surface)}",
        ),
    ]
    if surface.is_general_type:
        minus_K = -surface.canonical_class()
        results.append(
            _guarded(
                "sw(-K_X) = 1",
                lambda: any(b.cls == minus_K and b.sw == 1 for b in basics),
            )
        )
    return results


# ── series ─────────────────────────────────────────────────────────────────────

def check_series(surface, L, frame):
    series = closed_form(surface, L)
    reference = expand(series, frame)
    assembled = assemble_structure(surface, L, basic_classes(surface, L))
    results = [
        _guarded(
            "structure theorem = closed form",
            lambda: expand(assembled, frame) == reference,
        ),
        _guarded(
            "parity of degrees",
            lambda: not parity_violations(reference, series_parity(surface, L)),
            f"parity {series_parity(surface, L)}",
        ),
    ]
    if series.exponential_form is not None:
        results.append(
            _guarded(
                "sinh ratio = exponential sum",
                lambda: expand(series.exponential_form, frame) == reference,
            )
        )
    return results


# ── evaluate ───────────────────────────────────────────────────────────────────

def check_evaluate(series, frame, request, value):
    surface, L = series.surface, series.L
    results = [
        _guarded(
            "d(L,k) from b_+",
            lambda: virtual_dim(surface, L, request.k) == virtual_dim_from_b_plus(
                1 + 2 * surface.p_g, int(surface.self_int(L)), request.k
            ),
        ),
    ]
    if request.point_power >= 2:
        lowered = EvalRequest(request.arguments, request.point_power - 2, request.k - 1)
        results.append(
            _guarded(
                "simple type q(.., x^2) = 4 q_{k-1}(..)",
                lambda: value == 4 * evaluate(series, frame, lowered),
            )
        )
    shifted = EvalRequest(request.arguments + ((frame.names[0], 1),), request.point_power, request.k)
    results.append(
        _guarded("degree mismatch gives 0", lambda: evaluate(series, frame, shifted) == 0)
    )
    return results


# ── bounds ─────────────────────────────────────────────────────────────────────

def check_bounds(surface, L, report):
    residue = (-int(surface.self_int(L)) - 3 * (1 + surface.p_g)) % 4
    return [
        CheckResult("d_upper in {n, n+2}", report.d_upper in (report.order_n, report.order_n + 2)),
        CheckResult("d_upper = -L^2 - 3(1+p_g) mod 4", report.d_upper % 4 == residue),
        CheckResult(
            "d_upper <= closed bound",
            report.within_closed_bound,
            f"{report.d_upper} vs {report.closed_bound}",
        ),
        CheckResult(
            "order after odd blow-up = n + 1",
            report.order_after_blowup == report.order_n + 1,
        ),
    ]


# ── tau ────────────────────────────────────────────────────────────────────────

def check_tau(surface, k, report):
    results = [
        CheckResult("rank = floor((d - e)/2)", report.rank == max((report.d - report.e_divisors) // 2, 0)),
        CheckResult("rank unchanged by an odd blow-up", report.rank_after_blowup == report.rank),
    ]
    if surface.is_elliptic and not report.degenerate:
        results.append(
            CheckResult("rank = 2k - 2p_g - 1", report.rank == 2 * k - 2 * surface.p_g - 1)
        )
    if report.certificate_value is not None:
        results.append(CheckResult("certificate nonzero", report.certificate_value != 0))
        results.append(
            CheckResult(
                "certificate = q0 prod(H.C_i) (w/2)^{(d-e)/2} c",
                report.certificate_value == report.certificate_expected,
            )
        )
    if report.certificate_vanishing is not None:
        results.append(CheckResult("vanishing slot = 0", report.certificate_vanishing == 0))
    return results


# ── blowup ─────────────────────────────────────────────────────────────────────

def check_blowup(series, transformed, frame, parity):
    reference = expand(transformed, frame)
    results = [
        _guarded(
            "sinh/cosh(E) e^{-E.E/2} pulled back",
            lambda: expand_pulled_back(series, transformed.surface, frame, parity) == reference,
        ),
    ]
    if transformed.surface.is_general_type:
        results.append(
            _guarded(
                "closed form on the blow-up",
                lambda: expand(
                    closed_form_general_type(transformed.surface, transformed.L), frame
                ) == reference,
            )
        )
    results.append(
        CheckResult(
            "Witten factor halves",
            witten_factor(transformed.surface) * 2 == witten_factor(series.surface),
        )
    )
    return results
