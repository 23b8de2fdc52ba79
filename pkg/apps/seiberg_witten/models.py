from dataclasses import dataclass
from fractions import Fraction

from apps.surfaces.models import CohClass


@dataclass(frozen=True)
class BasicClass:
    cls: CohClass
    sw: Fraction
    km: Fraction
    # Enumeration tuple (d, a_1, ..., a_n) on elliptic surfaces; empty otherwise.
    label: tuple = ()

    def sort_key(self):
        return (self.cls.coords, self.label)


def merged_multiplicities(basics):
    """Total sw per class, dropping classes whose tuples cancel."""
    merged = {}
    for basic in basics:
        merged[basic.cls] = merged.get(basic.cls, 0) + basic.sw
    return {cls: sw for cls, sw in merged.items() if sw}
