from dataclasses import dataclass, field
from fractions import Fraction

from django.db import models


class WallVerdict(models.TextChoices):
    GOOD = "good", "H.L odd: no wall"
    UNKNOWN = "unknown", "Not decided"


class Specialization(models.TextChoices):
    GENERAL_TYPE = "general_type", "General type"
    ELLIPTIC = "elliptic", "Elliptic over P1"
    GENERIC = "generic", "Generic"


class CaseMod4(models.TextChoices):
    ORDER = "n", "d = n"
    ORDER_PLUS_TWO = "n_plus_2", "d = n + 2"


# ── Assumption banners ─────────────────────────────────────────────────────────

EXISTENCE_ASSUMPTIONS = (
    "The polarization H does not lie on a wall of type (L, k): "
    "only the sufficient condition 'H integral and H.L odd' is checked.",
    "Semistable sheaves are detected through a nonvanishing Donaldson invariant; "
    "no sheaf is constructed.",
)

LOWER_BOUND_ASSUMPTION = (
    "d(L,k) >= odd(L) - 3(1 + p_g) needs a polarization sufficiently close to "
    "a class pulled back from the minimal model."
)

TAU_ASSUMPTIONS = (
    "k >> 0: the moduli space of stable sheaves is irreducible and generically smooth "
    "of the expected dimension.",
    "The canonical two-form is induced by a holomorphic 2-form whose divisor is "
    "the sum of the tracked effective classes C_i.",
    "The series is written with e^{Q/2}; rank statements written with e^Q are read "
    "as the same series.",
)


@dataclass(frozen=True)
class ExistenceReport:
    order_n: int
    d_upper: int
    k_at_bound: int
    case_mod4: str
    specialization: str
    closed_bound: int
    within_closed_bound: bool
    d_lower_remark: int = None
    order_after_blowup: int = None
    assumptions: tuple = field(default=EXISTENCE_ASSUMPTIONS)


@dataclass(frozen=True)
class TauCertificate:
    value: Fraction
    vanishing: Fraction
    expected: Fraction
    divisors: tuple


@dataclass(frozen=True)
class TauRankReport:
    e_divisors: int
    d: int
    rank: int
    certificate_value: Fraction
    certificate_vanishing: Fraction
    certificate_expected: Fraction
    degenerate: bool = False
    rank_after_blowup: int = None
    divisors: tuple = ()
    assumptions: tuple = field(default=TAU_ASSUMPTIONS)
