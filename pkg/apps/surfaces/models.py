"""
Rational model of the part of H^2 of a regular surface that the Donaldson
series sees.

Basis layout, shared by both variants:

    [primary, E1, ..., Er, H, W]

primary is K_min (general type) or the fibre class F (elliptic over P^1),
E_i are the (-1)-curves, H is the polarization and W is the class of
omega + omega-bar, orthogonal to every algebraic class.
"""
from dataclasses import dataclass, field
from fractions import Fraction

from django.db import models

from apps.core.exceptions import (
    IncompatibleClassError,
    InvalidProbeError,
    SpecificationError,
    UnsupportedSurfaceError,
)
from apps.core.utils import is_integral, to_fraction


PROBE_W = "W"
POLARIZATION = "H"


class SurfaceVariant(models.TextChoices):
    GENERAL_TYPE = "general_type", "General type"
    ELLIPTIC = "elliptic", "Elliptic over P1"


class ClassKind(models.TextChoices):
    ALGEBRAIC = "algebraic", "Algebraic"
    TRANSCENDENTAL = "transcendental", "Transcendental probe"


@dataclass(frozen=True)
class SurfaceData:
    variant: str
    p_g: int
    K_min_sq: int = 0
    num_blowups: int = 0
    multiplicities: tuple = ()
    # Expert override of the Noether-derived characteristic numbers.
    euler: int = None
    signature: int = None

    def __post_init__(self):
        object.__setattr__(self, "multiplicities", tuple(self.multiplicities))

    @property
    def is_elliptic(self):
        return self.variant == SurfaceVariant.ELLIPTIC

    @property
    def is_general_type(self):
        return self.variant == SurfaceVariant.GENERAL_TYPE

    def clean(self):
        errors = {}

        if self.variant not in SurfaceVariant.values:
            errors["variant"] = f"Unknown surface variant {self.variant!r}."

        if not isinstance(self.p_g, int) or self.p_g < 1:
            errors["p_g"] = "p_g must be an integer >= 1 (b_+ >= 3, b_1 = 0)."

        if not isinstance(self.num_blowups, int) or self.num_blowups < 0:
            errors["num_blowups"] = "The number of blow-ups must be >= 0."

        if self.is_elliptic:
            if self.K_min_sq:
                errors["K_min_sq"] = "A relatively minimal elliptic surface has K_min^2 = 0."
            if any(not isinstance(p, int) or p < 2 for p in self.multiplicities):
                errors["multiplicities"] = "Fibre multiplicities must be integers >= 2."
        elif self.multiplicities:
            errors["multiplicities"] = "Only elliptic surfaces have multiple fibres."

        if errors:
            raise SpecificationError(
                "; ".join(f"{key}: {value}" for key, value in errors.items()),
                errors=errors,
            )

        if self.is_elliptic and self.multiplicities and all(
            p % 2 == 0 for p in self.multiplicities
        ):
            raise UnsupportedSurfaceError(
                "gcd rule: 2 must not divide gcd(p_1, ..., p_n); "
                f"multiplicities {list(self.multiplicities)} are all even.",
                multiplicities=self.multiplicities,
            )


@dataclass(frozen=True)
class CohClass:
    basis: tuple
    coords: tuple

    def __post_init__(self):
        coords = tuple(Fraction(c) for c in self.coords)
        if len(coords) != len(self.basis):
            raise IncompatibleClassError(
                "Coordinate vector does not match the basis.",
                basis=self.basis,
            )
        object.__setattr__(self, "basis", tuple(self.basis))
        object.__setattr__(self, "coords", coords)

    @property
    def kind(self):
        if PROBE_W in self.basis and self.coords[self.basis.index(PROBE_W)]:
            return ClassKind.TRANSCENDENTAL
        return ClassKind.ALGEBRAIC

    def coord(self, name):
        return self.coords[self.basis.index(name)]

    def is_zero(self):
        return not any(self.coords)

    def is_integral(self):
        return all(is_integral(c) for c in self.coords)

    def _check(self, other):
        if not isinstance(other, CohClass) or other.basis != self.basis:
            raise IncompatibleClassError("Classes are expressed in different bases.")

    def __add__(self, other):
        self._check(other)
        return CohClass(self.basis, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._check(other)
        return CohClass(self.basis, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return CohClass(self.basis, tuple(-a for a in self.coords))

    def __mul__(self, factor):
        factor = Fraction(factor)
        return CohClass(self.basis, tuple(factor * a for a in self.coords))

    __rmul__ = __mul__

    def describe(self):
        parts = []
        for name, c in zip(self.basis, self.coords):
            if not c:
                continue
            if c == 1:
                parts.append(f"+{name}")
            elif c == -1:
                parts.append(f"-{name}")
            else:
                sign = "+" if c > 0 else "-"
                parts.append(f"{sign}{abs(c)}{name}")
        text = "".join(parts).lstrip("+")
        return text or "0"


@dataclass(frozen=True)
class CharNumbers:
    e: int
    sigma: int
    b_plus: int
    chi: int
    K_sq: int


@dataclass(frozen=True)
class Surface:
    """
    A built surface: basis names, Gram matrix and the data it came from.
    Build through apps.surfaces.utils.build_surface.
    """
    data: SurfaceData
    basis: tuple
    gram: tuple
    w: Fraction
    h_pairings: tuple = field(default=())
    h_square: Fraction = Fraction(1)

    # ── Shape ─────────────────────────────────────────────────────────────────

    @property
    def p_g(self):
        return self.data.p_g

    @property
    def r(self):
        return self.data.num_blowups

    @property
    def is_elliptic(self):
        return self.data.is_elliptic

    @property
    def is_general_type(self):
        return self.data.is_general_type

    @property
    def is_minimal(self):
        return self.r == 0

    @property
    def primary_name(self):
        return self.basis[0]

    # ── Classes ───────────────────────────────────────────────────────────────

    def cls(self, coords):
        coords = tuple(to_fraction(c) for c in coords)
        if len(coords) != len(self.basis):
            raise IncompatibleClassError(
                f"Expected {len(self.basis)} coordinates over {list(self.basis)}, got {len(coords)}."
            )
        return CohClass(self.basis, coords)

    def algebraic_cls(self, coords):
        """A class given over the basis without W."""
        coords = list(coords)
        if len(coords) != len(self.basis) - 1:
            raise IncompatibleClassError(
                f"Expected {len(self.basis) - 1} coordinates over {list(self.basis[:-1])}, "
                f"got {len(coords)}."
            )
        return self.cls(coords + [0])

    def zero(self):
        return CohClass(self.basis, (0,) * len(self.basis))

    def basis_class(self, name):
        if name not in self.basis:
            raise IncompatibleClassError(f"{name!r} is not a basis class of this surface.")
        return CohClass(self.basis, tuple(1 if b == name else 0 for b in self.basis))

    def primary(self):
        return self.basis_class(self.primary_name)

    def exceptional(self, i):
        if not 1 <= i <= self.r:
            raise IncompatibleClassError(f"No exceptional curve E{i} on this surface.")
        return self.basis_class(f"E{i}")

    def exceptionals(self):
        return [self.exceptional(i) for i in range(1, self.r + 1)]

    def polarization(self):
        return self.basis_class(POLARIZATION)

    def probe_w(self):
        return self.basis_class(PROBE_W)

    def fiber(self):
        if not self.is_elliptic:
            raise UnsupportedSurfaceError("Only elliptic surfaces have a fibre class.")
        return self.primary()

    def multiple_fiber(self, i):
        """F_i = F / p_i: there is no torsion to keep track of."""
        p = self.data.multiplicities[i - 1]
        return self.fiber() * Fraction(1, p)

    def minimal_canonical_class(self):
        if self.is_general_type:
            return self.primary()
        F = self.fiber()
        canonical = F * (self.p_g - 1)
        for i in range(1, len(self.data.multiplicities) + 1):
            canonical = canonical + self.multiple_fiber(i) * (self.data.multiplicities[i - 1] - 1)
        return canonical

    def canonical_class(self):
        canonical = self.minimal_canonical_class()
        for E in self.exceptionals():
            canonical = canonical + E
        return canonical

    # ── Pairing ───────────────────────────────────────────────────────────────

    def _check(self, a):
        if not isinstance(a, CohClass) or a.basis != self.basis:
            raise IncompatibleClassError(
                "Class is not expressed in this surface's basis.",
                basis=self.basis,
            )

    def pair(self, a, b):
        self._check(a)
        self._check(b)
        total = Fraction(0)
        for i, x in enumerate(a.coords):
            if not x:
                continue
            row = self.gram[i]
            for j, y in enumerate(b.coords):
                if y:
                    total += x * row[j] * y
        return total

    def self_int(self, a):
        return self.pair(a, a)

    # ── Blow-up ───────────────────────────────────────────────────────────────

    def lift(self, a):
        """Pull a class back to the blow-up: the new E coordinate is 0."""
        self._check(a)
        coords = list(a.coords)
        coords.insert(self.r + 1, Fraction(0))
        return CohClass(self.blown_up_basis(), tuple(coords))

    def blown_up_basis(self):
        basis = list(self.basis)
        basis.insert(self.r + 1, f"E{self.r + 1}")
        return tuple(basis)

    def __str__(self):
        if self.is_elliptic:
            return (
                f"elliptic p_g={self.p_g} multiplicities={list(self.data.multiplicities)}"
                + (f" r={self.r}" if self.r else "")
            )
        return f"general_type p_g={self.p_g} K_min^2={self.data.K_min_sq} r={self.r}"


def validate_probe_weight(w):
    w = to_fraction(w)
    if w <= 0:
        raise InvalidProbeError("W.W = w must be positive.", w=w)
    return w
