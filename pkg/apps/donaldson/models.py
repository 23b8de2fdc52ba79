"""
Structured Donaldson series.

A StructuredSeries keeps q_L as a product of named pieces instead of a bag of
coefficients:

    constant * e^{Q/2} * (sum_i c_i e^{K_i}) * prod factors / prod quotients

so that the effective divisor classes stay visible for the rank analysis.
Expansion against a probe frame lives in apps.donaldson.expansion.
"""
from dataclasses import dataclass, field, replace
from fractions import Fraction

from django.db import models

from apps.core.exceptions import SpecificationError


class FactorKind(models.TextChoices):
    SINH = "sinh", "sinh"
    COSH = "cosh", "cosh"
    EXP = "exp", "exp"


class BlowupParity(models.TextChoices):
    ODD = "odd", "L.E odd"
    EVEN = "even", "L.E even"


# Conventions recorded with every exported series.
CONVENTIONS = {
    "gaussian": "e^{Q/2} throughout; series written with e^Q in rank statements are read as the same object",
    "general_type_multiplicities": "km values are defined by the closed form; sw = km / 2^{2+(7e+11sigma)/4}",
    "elliptic_base": "elliptic fibrations over P1 (base genus 0)",
    "blowup": "q_{L-E} = sinh(E) e^{-E.E/2} q_L (odd, L.E = 1), q_L = cosh(E) e^{-E.E/2} q_L on the blow-up (even)",
}


@dataclass(frozen=True)
class SeriesFactor:
    kind: str
    cls: object
    power: int = 1

    def __post_init__(self):
        if self.kind not in FactorKind.values:
            raise SpecificationError(f"Unknown factor kind {self.kind!r}.")
        if not isinstance(self.power, int) or self.power < 1:
            raise SpecificationError("Factor powers must be positive integers.")

    def lifted(self, surface):
        return replace(self, cls=surface.lift(self.cls))


@dataclass(frozen=True)
class ExpTerm:
    coefficient: Fraction
    cls: object

    def lifted(self, surface):
        return replace(self, cls=surface.lift(self.cls))


@dataclass(frozen=True)
class StructuredSeries:
    surface: object
    L: object
    constant: Fraction
    gaussian: bool = True
    # Empty means the exponential sum is 1.
    exp_terms: tuple = ()
    factor_terms: tuple = ()
    quotient_terms: tuple = ()
    divisor_factors: tuple = ()
    # Same series without quotients, when one is known.
    exponential_form: "StructuredSeries" = None
    metadata: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "constant", Fraction(self.constant))
        for name in ("exp_terms", "factor_terms", "quotient_terms", "divisor_factors"):
            object.__setattr__(self, name, tuple(getattr(self, name)))

    @property
    def has_quotients(self):
        return bool(self.quotient_terms)

    def classes(self):
        """Every class the series pairs against a probe."""
        found = [term.cls for term in self.exp_terms]
        found += [factor.cls for factor in self.factor_terms]
        found += [factor.cls for factor in self.quotient_terms]
        return found

    def describe(self):
        pieces = [str(self.constant)]
        if self.gaussian:
            pieces.append("e^{Q/2}")
        if self.exp_terms:
            pieces.append(
                "(" + " + ".join(f"{t.coefficient} e^{{{t.cls.describe()}}}" for t in self.exp_terms) + ")"
            )
        for factor in self.factor_terms:
            power = f"^{factor.power}" if factor.power != 1 else ""
            pieces.append(f"{factor.kind}{power}({factor.cls.describe()})")
        text = " ".join(pieces)
        if self.quotient_terms:
            text += " / " + " ".join(
                f"{q.kind}({q.cls.describe()})" + (f"^{q.power}" if q.power != 1 else "")
                for q in self.quotient_terms
            )
        return text


@dataclass(frozen=True)
class EvalRequest:
    """
    q_{L,k}(P_1^{m_1} ... P_j^{m_j}, x^{point_power}); arguments are
    (probe name, multiplicity) pairs over the evaluation frame.
    """
    arguments: tuple
    point_power: int = 0
    k: int = 0

    def __post_init__(self):
        arguments = tuple((name, int(m)) for name, m in self.arguments)
        if any(m < 0 for _, m in arguments):
            raise SpecificationError("Multiplicities must be non-negative.")
        if not isinstance(self.point_power, int) or self.point_power < 0:
            raise SpecificationError("point_power must be a non-negative integer.")
        object.__setattr__(self, "arguments", arguments)

    @property
    def degree(self):
        return sum(m for _, m in self.arguments)
