from fractions import Fraction

from django.test import SimpleTestCase
from hypothesis import given, settings
from hypothesis import strategies as st

from apps.core.exceptions import (
    CharacteristicViolationError,
    InconsistentInvariantsError,
    UnsupportedSurfaceError,
)
from apps.donaldson.builders import assemble_structure, closed_form
from apps.donaldson.expansion import expand
from apps.seiberg_witten.models import merged_multiplicities
from apps.seiberg_witten.utils import (
    basic_classes_elliptic,
    basic_classes_general_type,
    check_characteristic,
    check_pairing_symmetry,
    check_simple_type,
)
from apps.seiberg_witten.witten import witten_exponent, witten_exponent_from, witten_factor
from apps.surfaces.models import SurfaceData, SurfaceVariant
from apps.surfaces.utils import blow_up, build_surface, char_numbers, probe_frame


def general_type(p_g=2, K_sq=1, r=0, **kwargs):
    return build_surface(
        SurfaceData(SurfaceVariant.GENERAL_TYPE, p_g, K_min_sq=K_sq, num_blowups=r), **kwargs
    )


def elliptic(p_g=1, multiplicities=()):
    return build_surface(SurfaceData(SurfaceVariant.ELLIPTIC, p_g, multiplicities=multiplicities))


class WittenFactorTests(SimpleTestCase):

    def test_k3(self):
        self.assertEqual(witten_factor(elliptic()), 1)

    def test_general_type(self):
        self.assertEqual(witten_factor(general_type()), 1)

    def test_halves_per_blow_up(self):
        surface = general_type()
        for _ in range(3):
            blown = blow_up(surface)
            self.assertEqual(witten_factor(blown) * 2, witten_factor(surface))
            surface = blown
        self.assertEqual(witten_factor(surface), Fraction(1, 8))

    def test_elliptic_factor(self):
        for p_g in (1, 2, 3):
            self.assertEqual(witten_factor(elliptic(p_g)), Fraction(2) ** (1 - p_g))

    def test_noether_form_of_exponent(self):
        surfaces = [elliptic(), elliptic(2, (2, 3)), general_type(), general_type(4, 3, 2)]
        for surface in surfaces:
            numbers = char_numbers(surface)
            self.assertEqual(witten_exponent(surface), 2 + numbers.K_sq - numbers.chi)

    def test_non_divisible_exponent(self):
        with self.assertRaises(InconsistentInvariantsError):
            witten_exponent_from(1, 0)


class EllipticBasicClassesTests(SimpleTestCase):

    def test_dolgachev_classes(self):
        basics = basic_classes_elliptic(elliptic(1, (2, 3)))
        coefficients = [basic.cls.coord("F") for basic in basics]
        self.assertEqual(
            coefficients,
            [Fraction(-7, 6), Fraction(-1, 2), Fraction(-1, 6), Fraction(1, 6), Fraction(1, 2), Fraction(7, 6)],
        )
        self.assertTrue(all(basic.sw == 1 and basic.km == 1 for basic in basics))

    def test_k3_single_class(self):
        basics = basic_classes_elliptic(elliptic())
        self.assertEqual(len(basics), 1)
        self.assertTrue(basics[0].cls.is_zero())
        self.assertEqual(basics[0].sw, 1)

    def test_p_g_two_without_fibres(self):
        surface = elliptic(2)
        table = {basic.cls.coord("F"): basic.sw for basic in basic_classes_elliptic(surface)}
        self.assertEqual(table, {-1: 1, 1: -1})

    def test_count_is_p_g_times_multiplicities(self):
        for p_g, multiplicities in [(1, (2, 3)), (2, (3, 5)), (3, (2, 3, 5))]:
            expected = p_g
            for p in multiplicities:
                expected *= p
            basics = basic_classes_elliptic(elliptic(p_g, multiplicities))
            self.assertEqual(len(basics), expected)

    def test_coinciding_tuples_stay_separate(self):
        surface = elliptic(1, (3, 3))
        basics = basic_classes_elliptic(surface)
        self.assertEqual(len(basics), 9)
        self.assertEqual(len({basic.cls for basic in basics}), 5)
        self.assertEqual(len({basic.label for basic in basics}), 9)
        self.assertTrue(all(basic.sw == 1 for basic in basics))
        merged = {cls.coord("F"): sw for cls, sw in merged_multiplicities(basics).items()}
        self.assertEqual(
            merged,
            {Fraction(-4, 3): 1, Fraction(-2, 3): 2, 0: 3, Fraction(2, 3): 2, Fraction(4, 3): 1},
        )
        check_pairing_symmetry(basics)

    def test_coinciding_tuples_assemble_to_closed_form(self):
        surface = elliptic(1, (3, 3))
        L = surface.zero()
        frame = probe_frame(surface, [("F", surface.fiber()), ("S", surface.polarization())], 4)
        assembled = assemble_structure(surface, L, basic_classes_elliptic(surface))
        self.assertEqual(expand(assembled, frame), expand(closed_form(surface, L), frame))

    def test_invariants(self):
        surface = elliptic(3, (2, 5))
        basics = basic_classes_elliptic(surface)
        check_simple_type(surface, basics)
        check_pairing_symmetry(basics)
        factor = witten_factor(surface)
        self.assertTrue(all(basic.km == factor * basic.sw for basic in basics))

    def test_needs_minimal_surface(self):
        with self.assertRaises(UnsupportedSurfaceError):
            basic_classes_elliptic(blow_up(elliptic()))


class GeneralTypeBasicClassesTests(SimpleTestCase):

    def test_minimal(self):
        surface = general_type()
        K = surface.primary()
        table = {basic.cls: basic for basic in basic_classes_general_type(surface, surface.zero())}
        self.assertEqual(set(table), {K, -K})
        self.assertEqual(table[-K].km, 1)
        self.assertEqual(abs(table[K].km), 1)
        self.assertEqual(table[K].sw, (-1) ** (1 + surface.p_g))

    def test_one_blow_up(self):
        surface = general_type(r=1)
        basics = basic_classes_general_type(surface, surface.zero())
        self.assertEqual(len(basics), 4)
        minus_K = -surface.canonical_class()
        self.assertEqual([b.sw for b in basics if b.cls == minus_K], [1])
        self.assertTrue(all(b.km == Fraction(1, 2) * b.sw for b in basics))

    def test_invariants(self):
        surface = general_type(3, 2, 2)
        basics = basic_classes_general_type(surface, surface.zero())
        check_simple_type(surface, basics)
        check_pairing_symmetry(basics)
        for basic in basics:
            check_characteristic(surface, basic.cls)

    @settings(max_examples=20, deadline=None)
    @given(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3), st.integers(-2, 2))
    def test_multiplicities_do_not_depend_on_L(self, a, b, c, h):
        surface = general_type(p_g=3, K_sq=2, r=2)
        L = surface.algebraic_cls([a, b, c, 2 * h])
        reference = basic_classes_general_type(surface, surface.zero())
        self.assertEqual(basic_classes_general_type(surface, L), reference)

    def test_non_characteristic_L(self):
        surface = general_type(h_square=2)
        with self.assertRaises(CharacteristicViolationError):
            basic_classes_general_type(surface, surface.polarization())
