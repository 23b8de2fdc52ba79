"""
Truncated multivariate power series over exact rationals.

A series lives on a ProbeFrame: the probe variables t_1..t_k stand for the
classes P_1..P_k, and a series in the t_j is the restriction of a generating
function to the class sum t_1 P_1 + ... + t_k P_k. Series are truncated by
total degree and stored as sparse polynomials in a sympy ring over QQ with
one extra generator tracking the degree; nothing above the frame truncation
is ever stored.
"""
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType

from sympy import Dummy, Symbol
from sympy.polys.domains import QQ
from sympy.polys.ring_series import rs_mul, rs_trunc
from sympy.polys.rings import ring

from apps.core.exceptions import (
    DimensionError,
    IncompatibleFrameError,
    OrderUndeterminedError,
    SpecificationError,
)


Monomial = tuple  # exponent vector over the probes


@dataclass(frozen=True)
class ProbeFrame:
    names: tuple
    gram: tuple
    truncation: int
    # Optional: the classes behind the names, when the frame was built from a surface.
    classes: tuple = field(default=None, compare=False)

    def __post_init__(self):
        names = tuple(self.names)
        gram = tuple(tuple(Fraction(v) for v in row) for row in self.gram)

        if len(set(names)) != len(names):
            raise SpecificationError("Probe names must be unique.", names=names)

        if len(gram) != len(names) or any(len(row) != len(names) for row in gram):
            raise DimensionError(
                "Gram matrix must be square with one row per probe.",
                probes=len(names),
            )

        for i in range(len(names)):
            for j in range(i):
                if gram[i][j] != gram[j][i]:
                    raise SpecificationError(
                        f"Gram matrix is not symmetric at ({names[i]}, {names[j]})."
                    )

        if not isinstance(self.truncation, int) or self.truncation < 0:
            raise SpecificationError("Truncation must be a non-negative integer.")

        object.__setattr__(self, "names", names)
        object.__setattr__(self, "gram", gram)
        if self.classes is not None:
            object.__setattr__(self, "classes", tuple(self.classes))

    @property
    def size(self):
        return len(self.names)

    def index(self, name):
        try:
            return self.names.index(name)
        except ValueError:
            raise SpecificationError(f"Unknown probe {name!r}.", probes=self.names)

    def pairing(self, i, j):
        return self.gram[i][j]

    def with_truncation(self, truncation):
        if truncation == self.truncation:
            return self
        return replace(self, truncation=truncation)

    def same_probes(self, other):
        return self.names == other.names and self.gram == other.gram

    def unit(self, index):
        return tuple(1 if j == index else 0 for j in range(self.size))

    @property
    def ring(self):
        return graded_ring(self.names)

    @property
    def degree_generator(self):
        return self.ring.gens[-1]


def monomial_product(a, b):
    return tuple(x + y for x, y in zip(a, b))


# Every stored monomial t^a carries DEGREE^|a|, so truncating in DEGREE
# truncates by total degree.
DEGREE = Dummy("degree")


@lru_cache(maxsize=None)
def graded_ring(names):
    """QQ[t_1, ..., t_k, DEGREE] for the probe names, shared per name tuple."""
    ring_, *_ = ring([Symbol(name) for name in names] + [DEGREE], QQ)
    return ring_


def to_qq(value):
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def from_qq(value):
    return Fraction(int(value.numerator), int(value.denominator))


class ExpandedSeries:
    """
    Immutable truncated series backed by an element of the frame's graded
    sympy ring. The public view is monomial exponent vector -> Fraction.
    """

    __slots__ = ("frame", "_poly")

    def __init__(self, frame, terms=None):
        limit = frame.truncation
        graded = {}
        for monomial, coefficient in (terms or {}).items():
            monomial = tuple(monomial)
            if len(monomial) != frame.size:
                raise DimensionError(
                    "Monomial length does not match the number of probes.",
                    monomial=monomial,
                )
            degree = sum(monomial)
            if degree > limit:
                continue
            coefficient = to_qq(coefficient)
            if coefficient:
                graded[monomial + (degree,)] = coefficient
        object.__setattr__(self, "frame", frame)
        object.__setattr__(self, "_poly", frame.ring.from_dict(graded))

    def __setattr__(self, name, value):
        raise AttributeError("ExpandedSeries is immutable.")

    # ── Constructors ──────────────────────────────────────────────────────────

    @classmethod
    def zero(cls, frame):
        return cls(frame)

    @classmethod
    def constant(cls, frame, value):
        return cls(frame, {(0,) * frame.size: value})

    @classmethod
    def one(cls, frame):
        return cls.constant(frame, 1)

    @classmethod
    def from_poly(cls, frame, poly):
        """Wrap an element of the frame's graded ring, dropping terms above the truncation."""
        if poly.ring != frame.ring:
            raise IncompatibleFrameError(
                "Polynomial does not live in the graded ring of the frame.",
                probes=frame.names,
            )
        series = object.__new__(cls)
        object.__setattr__(series, "frame", frame)
        object.__setattr__(
            series, "_poly", rs_trunc(poly, frame.degree_generator, frame.truncation + 1)
        )
        return series

    # ── Accessors ─────────────────────────────────────────────────────────────

    @property
    def poly(self):
        return self._poly

    @property
    def terms(self):
        return MappingProxyType(
            {monomial[:-1]: from_qq(c) for monomial, c in self._poly.items()}
        )

    @property
    def truncation(self):
        return self.frame.truncation

    def is_zero(self):
        return not self._poly

    def coefficient(self, monomial):
        monomial = tuple(monomial)
        value = self._poly.get(monomial + (sum(monomial),))
        return Fraction(0) if value is None else from_qq(value)

    def constant_term(self):
        return self.coefficient((0,) * self.frame.size)

    def graded_parts(self):
        """Homogeneous parts as {degree: element of the graded ring}."""
        parts = {}
        for monomial, coefficient in self._poly.items():
            parts.setdefault(monomial[-1], {})[monomial] = coefficient
        return {d: self.frame.ring.from_dict(part) for d, part in parts.items()}

    def degrees(self):
        return sorted({monomial[-1] for monomial in self._poly})

    def homogeneous_part(self, degree):
        part = self.graded_parts().get(degree, self.frame.ring.zero)
        return ExpandedSeries.from_poly(self.frame, part)

    def order(self):
        if not self._poly:
            raise OrderUndeterminedError(
                f"Series vanishes up to degree {self.truncation}; raise the truncation.",
                truncation=self.truncation,
            )
        return min(monomial[-1] for monomial in self._poly)

    def truncate(self, truncation):
        if truncation > self.truncation:
            raise SpecificationError(
                "Cannot raise the truncation of an expanded series."
            )
        return ExpandedSeries.from_poly(self.frame.with_truncation(truncation), self._poly)

    def sorted_terms(self):
        """Deterministic order: by total degree, then reverse-lexicographic exponents."""
        return sorted(
            self.terms.items(),
            key=lambda item: (sum(item[0]), tuple(-e for e in item[0])),
        )

    # ── Ring operations ───────────────────────────────────────────────────────

    def _check_compatible(self, other):
        if not isinstance(other, ExpandedSeries):
            raise TypeError(f"Cannot combine a series with {type(other).__name__}.")
        if not self.frame.same_probes(other.frame) or self.truncation != other.truncation:
            raise IncompatibleFrameError(
                "Series live on different probe frames or truncations.",
                left=self.frame.names,
                right=other.frame.names,
            )

    def __add__(self, other):
        if not isinstance(other, ExpandedSeries):
            return self + ExpandedSeries.constant(self.frame, other)
        self._check_compatible(other)
        return ExpandedSeries.from_poly(self.frame, self._poly + other._poly)

    __radd__ = __add__

    def __neg__(self):
        return ExpandedSeries.from_poly(self.frame, -self._poly)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, factor):
        return ExpandedSeries.from_poly(self.frame, self._poly.mul_ground(to_qq(factor)))

    def __mul__(self, other):
        if not isinstance(other, ExpandedSeries):
            return self.scale(other)
        self._check_compatible(other)
        if not self._poly or not other._poly:
            return ExpandedSeries.zero(self.frame)
        return ExpandedSeries.from_poly(
            self.frame,
            rs_mul(self._poly, other._poly, self.frame.degree_generator, self.truncation + 1),
        )

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, ExpandedSeries):
            return NotImplemented
        return (
            self.frame.same_probes(other.frame)
            and self.truncation == other.truncation
            and self._poly == other._poly
        )

    def __hash__(self):
        return hash((self.frame.names, self.truncation, frozenset(self._poly.items())))

    def __repr__(self):
        terms = self.sorted_terms()
        shown = " + ".join(
            f"({c})*{_monomial_text(self.frame.names, m)}" for m, c in terms[:6]
        )
        if len(terms) > 6:
            shown += " + ..."
        return f"<ExpandedSeries D={self.truncation} {shown or '0'}>"


def _monomial_text(names, monomial):
    factors = [
        name if power == 1 else f"{name}^{power}"
        for name, power in zip(names, monomial)
        if power
    ]
    return "*".join(factors) or "1"


def monomial_text(frame, monomial):
    return _monomial_text(frame.names, monomial)
