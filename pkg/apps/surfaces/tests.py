from fractions import Fraction

from django.test import SimpleTestCase
from hypothesis import given, settings
from hypothesis import strategies as st

from apps.core.exceptions import (
    IncompatibleClassError,
    InconsistentInvariantsError,
    InvalidProbeError,
    SpecificationError,
    UnsupportedOperationError,
    UnsupportedSurfaceError,
)
from apps.surfaces.models import ClassKind, SurfaceData, SurfaceVariant
from apps.surfaces.utils import (
    admissible_k,
    blow_up,
    build_surface,
    char_numbers,
    decompose_L,
    virtual_dim,
    virtual_dim_from_b_plus,
)


def general_type(p_g=2, K_sq=1, r=0, **kwargs):
    return build_surface(
        SurfaceData(SurfaceVariant.GENERAL_TYPE, p_g, K_min_sq=K_sq, num_blowups=r), **kwargs
    )


def elliptic(p_g=1, multiplicities=(), **kwargs):
    return build_surface(SurfaceData(SurfaceVariant.ELLIPTIC, p_g, multiplicities=multiplicities), **kwargs)


class BuildSurfaceTests(SimpleTestCase):

    def test_general_type_basis_and_gram(self):
        surface = general_type(r=2)
        self.assertEqual(surface.basis, ("K_min", "E1", "E2", "H", "W"))
        self.assertEqual(surface.self_int(surface.primary()), 1)
        self.assertEqual(surface.self_int(surface.exceptional(2)), -1)
        self.assertEqual(surface.pair(surface.exceptional(1), surface.exceptional(2)), 0)
        self.assertEqual(surface.pair(surface.polarization(), surface.primary()), 1)

    def test_elliptic_classes(self):
        surface = elliptic(multiplicities=(2, 3))
        F = surface.fiber()
        self.assertEqual(surface.self_int(F), 0)
        self.assertEqual(surface.multiple_fiber(2) * 3, F)
        self.assertEqual(surface.canonical_class().coord("F"), Fraction(7, 6))

    def test_w_is_transcendental_and_orthogonal(self):
        surface = general_type(w=3)
        W = surface.probe_w()
        self.assertEqual(W.kind, ClassKind.TRANSCENDENTAL)
        self.assertEqual(surface.self_int(W), 3)
        self.assertEqual(surface.pair(W, surface.polarization()), 0)

    def test_gcd_rule(self):
        with self.assertRaisesMessage(UnsupportedSurfaceError, "gcd rule"):
            elliptic(multiplicities=(2, 4))

    def test_odd_multiplicity_passes_gcd_rule(self):
        self.assertEqual(elliptic(multiplicities=(2, 4, 3)).r, 0)

    def test_p_g_must_be_positive(self):
        with self.assertRaises(SpecificationError):
            general_type(p_g=0)

    def test_weight_must_be_positive(self):
        with self.assertRaises(InvalidProbeError):
            general_type(w=0)

    def test_pairing_across_bases(self):
        a, b = general_type(), general_type(r=1)
        with self.assertRaises(IncompatibleClassError):
            a.pair(a.primary(), b.primary())


class CharNumbersTests(SimpleTestCase):

    def test_k3(self):
        numbers = char_numbers(elliptic())
        self.assertEqual((numbers.e, numbers.sigma, numbers.b_plus), (24, -16, 3))

    def test_general_type(self):
        numbers = char_numbers(general_type())
        self.assertEqual((numbers.e, numbers.sigma, numbers.chi), (35, -23, 3))

    def test_blow_up_shifts_e_and_sigma(self):
        before = char_numbers(general_type())
        after = char_numbers(blow_up(general_type()))
        self.assertEqual((after.e, after.sigma), (before.e + 1, before.sigma - 1))

    def test_inconsistent_override(self):
        data = SurfaceData(SurfaceVariant.ELLIPTIC, 1, euler=24, signature=-15)
        with self.assertRaises(InconsistentInvariantsError):
            char_numbers(build_surface(data))

    def test_noether_identities_on_every_family(self):
        for surface in (elliptic(), elliptic(3, (2, 3, 5)), general_type(5, 4, 3)):
            numbers = char_numbers(surface)
            self.assertEqual(2 * numbers.e + 3 * numbers.sigma, numbers.K_sq)
            self.assertEqual(numbers.e + numbers.sigma - 2, 2 * numbers.b_plus)


class DecomposeTests(SimpleTestCase):

    def test_projection_kills_exceptional_pairings(self):
        surface = general_type(r=3)
        L = surface.algebraic_cls([1, 1, 0, 3, 2])
        decomposition = decompose_L(surface, L)
        self.assertEqual(decomposition.odd_indices, frozenset({1, 3}))
        self.assertEqual(decomposition.odd_count, 2)
        for E in surface.exceptionals():
            self.assertEqual(surface.pair(decomposition.L_min, E), 0)
        self.assertEqual(decomposition.L_min, surface.algebraic_cls([1, 0, 0, 0, 2]))

    def test_idempotent(self):
        surface = general_type(r=2)
        once = decompose_L(surface, surface.algebraic_cls([2, 1, -1, 1])).L_min
        self.assertEqual(decompose_L(surface, once).L_min, once)

    def test_elliptic_not_supported(self):
        surface = elliptic()
        with self.assertRaises(UnsupportedOperationError):
            decompose_L(surface, surface.zero())


class VirtualDimTests(SimpleTestCase):

    def test_k3(self):
        surface = elliptic()
        self.assertEqual(virtual_dim(surface, surface.zero(), 3), 6)

    def test_admissible_k(self):
        surface = general_type()
        L = surface.primary()
        self.assertEqual(admissible_k(surface, L, 2), 3)
        self.assertIsNone(admissible_k(surface, L, 3))

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 6), st.integers(0, 4), st.integers(-3, 3), st.integers(-3, 3), st.integers(0, 8))
    def test_b_plus_form_agrees(self, p_g, r, a, b, k):
        surface = general_type(p_g=p_g, r=r)
        L = surface.algebraic_cls([a] + [b] * r + [0])
        L_sq = int(surface.self_int(L))
        self.assertEqual(
            virtual_dim(surface, L, k),
            virtual_dim_from_b_plus(1 + 2 * p_g, L_sq, k),
        )


class LiftTests(SimpleTestCase):

    def test_lift_preserves_pairings(self):
        surface = general_type(r=1, h_pairings=[1, 1])
        blown = blow_up(surface)
        a = surface.algebraic_cls([1, 1, 2])
        b = surface.algebraic_cls([0, 3, -1])
        self.assertEqual(blown.pair(surface.lift(a), surface.lift(b)), surface.pair(a, b))
        self.assertEqual(blown.pair(surface.lift(a), blown.exceptional(2)), 0)
