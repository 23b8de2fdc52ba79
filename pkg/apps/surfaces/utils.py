import logging
from dataclasses import dataclass, replace
from fractions import Fraction

from apps.core.exceptions import (
    InconsistentInvariantsError,
    InvalidProbeError,
    SpecificationError,
    UnsupportedClassError,
    UnsupportedOperationError,
)
from apps.core.utils import is_integral, to_fraction
from apps.series.models import ProbeFrame
from apps.surfaces.models import (
    POLARIZATION,
    PROBE_W,
    CharNumbers,
    Surface,
    SurfaceData,
    validate_probe_weight,
)


logger = logging.getLogger(__name__)


# ── build_surface ──────────────────────────────────────────────────────────────

def build_surface(data: SurfaceData, h_pairings=None, h_square=1, w=1) -> Surface:
    """
    Basis and Gram data for a surface.

    h_pairings lists H.primary, H.E1, ..., H.Er (defaults: 1, 0, ..., 0);
    h_square is H.H and w = W.W.
    """
    data.clean()
    r = data.num_blowups
    w = validate_probe_weight(w)

    if h_pairings is None:
        h_pairings = [1] + [0] * r
    h_pairings = tuple(to_fraction(v) for v in h_pairings)
    h_square = to_fraction(h_square)
    if len(h_pairings) != r + 1:
        raise SpecificationError(
            f"H needs {r + 1} pairings (primary class and E1..E{r}), got {len(h_pairings)}."
        )
    if data.is_elliptic and h_pairings[0] <= 0:
        raise InvalidProbeError("The polarization must satisfy H.F > 0.")

    primary = "K_min" if data.is_general_type else "F"
    basis = (primary,) + tuple(f"E{i}" for i in range(1, r + 1)) + (POLARIZATION, PROBE_W)
    size = len(basis)
    h = r + 1

    gram = [[Fraction(0)] * size for _ in range(size)]
    gram[0][0] = Fraction(data.K_min_sq) if data.is_general_type else Fraction(0)
    for i in range(1, r + 1):
        gram[i][i] = Fraction(-1)
    for j, value in enumerate(h_pairings):
        gram[h][j] = value
        gram[j][h] = value
    gram[h][h] = h_square
    gram[size - 1][size - 1] = w

    surface = Surface(
        data=data,
        basis=basis,
        gram=tuple(tuple(row) for row in gram),
        w=w,
        h_pairings=h_pairings,
        h_square=h_square,
    )
    logger.debug("built surface %s with basis %s", surface, basis)
    return surface


def blow_up(surface: Surface, h_new_pairing=0, h_square=None, h_scale=1) -> Surface:
    """
    The surface blown up once more. The polarization is pulled back by
    default; h_scale and h_new_pairing describe h_scale * H - h_new_pairing * E
    (then pass its square as h_square).
    """
    data = replace(
        surface.data,
        num_blowups=surface.r + 1,
        euler=None if surface.data.euler is None else surface.data.euler + 1,
        signature=None if surface.data.signature is None else surface.data.signature - 1,
    )
    return build_surface(
        data,
        h_pairings=[h_scale * v for v in surface.h_pairings] + [h_new_pairing],
        h_square=surface.h_square if h_square is None else h_square,
        w=surface.w,
    )


# ── char_numbers ───────────────────────────────────────────────────────────────

def canonical_square(surface: Surface) -> int:
    return surface.data.K_min_sq - surface.r


def char_numbers(surface: Surface) -> CharNumbers:
    """
    Noether: chi = 1 + p_g, e = 12 chi - K^2, sigma = (K^2 - 2e)/3.
    An explicit (e, sigma) override is accepted only if it satisfies the same
    identities.
    """
    data = surface.data
    chi = 1 + data.p_g
    K_sq = canonical_square(surface)
    b_plus = 1 + 2 * data.p_g

    e = data.euler if data.euler is not None else 12 * chi - K_sq
    if data.signature is not None:
        sigma = data.signature
    else:
        if (K_sq - 2 * e) % 3:
            raise InconsistentInvariantsError(
                f"sigma = (K^2 - 2e)/3 is not an integer for K^2={K_sq}, e={e}."
            )
        sigma = (K_sq - 2 * e) // 3

    numbers = CharNumbers(e=e, sigma=sigma, b_plus=b_plus, chi=chi, K_sq=K_sq)
    check_char_numbers(numbers)
    return numbers


def check_char_numbers(numbers: CharNumbers):
    if 2 * numbers.e + 3 * numbers.sigma != numbers.K_sq:
        raise InconsistentInvariantsError(
            f"2e + 3 sigma = {2 * numbers.e + 3 * numbers.sigma} differs from K^2 = {numbers.K_sq}."
        )
    if numbers.e - 2 + numbers.sigma != 2 * numbers.b_plus:
        raise InconsistentInvariantsError(
            f"e={numbers.e}, sigma={numbers.sigma} give b_+ = "
            f"{Fraction(numbers.e - 2 + numbers.sigma, 2)}, expected {numbers.b_plus}."
        )
    if numbers.b_plus % 2 != 1:
        raise InconsistentInvariantsError("b_+ must be odd.")


# ── decompose_L ────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Decomposition:
    L_min: object
    odd_indices: frozenset
    odd_count: int


def decompose_L(surface: Surface, L) -> Decomposition:
    """
    L_min is the projection of L away from the (-1)-curves:
    L_min = L + sum_i (L.E_i) E_i.
    """
    if not surface.is_general_type:
        raise UnsupportedOperationError("decompose_L needs a surface of general type.")
    if not L.is_integral():
        raise UnsupportedClassError("L must have integer coordinates.")

    L_min = L
    odd = set()
    for i, E in enumerate(surface.exceptionals(), start=1):
        value = surface.pair(L, E)
        if not is_integral(value):
            raise UnsupportedClassError(f"L.E{i} = {value} is not an integer.")
        if value % 2:
            odd.add(i)
        L_min = L_min + E * value
    return Decomposition(L_min=L_min, odd_indices=frozenset(odd), odd_count=len(odd))


def odd_count(surface: Surface, L) -> int:
    if not surface.is_general_type:
        return 0
    return decompose_L(surface, L).odd_count


# ── virtual_dim / admissible_k ─────────────────────────────────────────────────

def integral_square(surface: Surface, L) -> int:
    value = surface.self_int(L)
    if not is_integral(value):
        raise UnsupportedClassError(f"L^2 = {value} is not an integer.")
    return int(value)


def virtual_dim(surface: Surface, L, k: int) -> int:
    """d(L,k) = 4k - L^2 - 3(1 + p_g)."""
    return 4 * k - integral_square(surface, L) - 3 * (1 + surface.p_g)


def virtual_dim_from_b_plus(b_plus: int, L_sq: int, k: int) -> int:
    value = 4 * k - Fraction(L_sq) - Fraction(3, 2) * (b_plus + 1)
    if not is_integral(value):
        raise InconsistentInvariantsError("b_+ must be odd for an integral dimension.")
    return int(value)


def admissible_k(surface: Surface, L, d: int):
    """The k with d(L,k) = d, or None when d has the wrong residue mod 4."""
    shifted = d + integral_square(surface, L) + 3 * (1 + surface.p_g)
    if shifted % 4:
        return None
    return shifted // 4


# ── Probe frames ───────────────────────────────────────────────────────────────

def probe_frame(surface: Surface, probes, truncation: int) -> ProbeFrame:
    """
    A frame whose probes are classes on the surface; probes is a sequence of
    (name, class) pairs.
    """
    probes = list(probes)
    names = tuple(name for name, _ in probes)
    classes = tuple(cls for _, cls in probes)
    gram = tuple(
        tuple(surface.pair(a, b) for b in classes)
        for a in classes
    )
    return ProbeFrame(names=names, gram=gram, truncation=truncation, classes=classes)


def basis_frame(surface: Surface, truncation: int, include_w=False) -> ProbeFrame:
    names = surface.basis if include_w else surface.basis[:-1]
    return probe_frame(
        surface,
        [(name, surface.basis_class(name)) for name in names],
        truncation,
    )


def with_probe_weight(surface: Surface, w) -> Surface:
    if to_fraction(w) == surface.w:
        return surface
    return build_surface(surface.data, surface.h_pairings, surface.h_square, w)
