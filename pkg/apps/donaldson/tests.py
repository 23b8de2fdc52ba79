from fractions import Fraction
from math import factorial

from django.test import SimpleTestCase
from hypothesis import given, settings
from hypothesis import strategies as st
from rest_framework.renderers import JSONRenderer

from apps.core.exceptions import CharacteristicViolationError, UnsupportedClassError
from apps.donaldson.builders import (
    assemble_structure,
    blowup_transform,
    closed_form_elliptic,
    closed_form_general_type,
    elliptic_constant,
    exponential_terms,
)
from apps.donaldson.expansion import (
    evaluate,
    expand,
    expand_pulled_back,
    parity_violations,
    series_parity,
)
from apps.donaldson.models import BlowupParity, EvalRequest, FactorKind
from apps.donaldson.serializers import export_series, load_series
from apps.seiberg_witten.utils import basic_classes_elliptic, basic_classes_general_type
from apps.series.algebra import exp_like, polarized_coefficient, quadratic_form
from apps.surfaces.models import SurfaceData, SurfaceVariant
from apps.surfaces.utils import basis_frame, build_surface, probe_frame, virtual_dim


def general_type(p_g=2, K_sq=1, r=0, **kwargs):
    return build_surface(
        SurfaceData(SurfaceVariant.GENERAL_TYPE, p_g, K_min_sq=K_sq, num_blowups=r), **kwargs
    )


def elliptic(p_g=1, multiplicities=(), **kwargs):
    return build_surface(
        SurfaceData(SurfaceVariant.ELLIPTIC, p_g, multiplicities=multiplicities), **kwargs
    )


def two_probes(surface, truncation):
    """Two generic algebraic probes."""
    size = len(surface.basis) - 1
    first = [Fraction(j + 1, j + 2) * (-1) ** j for j in range(size)]
    second = [Fraction(2 * j + 3, 3) for j in range(size)]
    return probe_frame(
        surface,
        [("P", surface.algebraic_cls(first)), ("R", surface.algebraic_cls(second))],
        truncation,
    )


small_fractions = st.fractions(min_value=-2, max_value=2, max_denominator=4)
nonzero_fractions = small_fractions.filter(lambda v: v != 0)


class AssembleStructureTests(SimpleTestCase):

    def test_single_class_gives_gaussian(self):
        surface = elliptic(h_square=2)
        series = assemble_structure(surface, surface.zero(), basic_classes_elliptic(surface))
        frame = basis_frame(surface, 6)
        self.assertEqual(expand(series, frame), exp_like(quadratic_form(frame)))

    def test_minimal_general_type_matches_closed_form(self):
        surface = general_type()
        for L in (surface.zero(), surface.primary(), surface.polarization()):
            with self.subTest(L=L.describe()):
                basics = basic_classes_general_type(surface, L)
                frame = basis_frame(surface, 8)
                self.assertEqual(
                    expand(assemble_structure(surface, L, basics), frame),
                    expand(closed_form_general_type(surface, L), frame),
                )

    def test_blown_up_general_type_matches_closed_form(self):
        surface = general_type(p_g=3, K_sq=2, r=2)
        L = surface.algebraic_cls([1, 1, 2, 0])
        frame = two_probes(surface, 8)
        self.assertEqual(
            expand(assemble_structure(surface, L, basic_classes_general_type(surface, L)), frame),
            expand(closed_form_general_type(surface, L), frame),
        )

    def test_elliptic_p_g_two_is_sinh(self):
        surface = elliptic(2)
        L = surface.zero()
        frame = basis_frame(surface, 9)
        assembled = expand(assemble_structure(surface, L, basic_classes_elliptic(surface)), frame)
        self.assertEqual(assembled, expand(closed_form_elliptic(surface, L), frame))
        self.assertTrue(all(d % 2 == 1 for d in assembled.degrees()))

    def test_characteristic_violation(self):
        surface = general_type(h_square=2)
        basics = basic_classes_general_type(surface, surface.zero())
        with self.assertRaises(CharacteristicViolationError):
            assemble_structure(surface, surface.polarization(), basics)


class ClosedFormTests(SimpleTestCase):

    def test_q0_for_canonical_L(self):
        surface = general_type()
        self.assertEqual(closed_form_general_type(surface, surface.primary()).constant, 1)

    def test_odd_exceptional_pairing_gives_sinh(self):
        surface = general_type(r=1)
        L = surface.algebraic_cls([0, 1, 0])
        series = closed_form_general_type(surface, L)
        self.assertEqual([f.kind for f in series.factor_terms], [FactorKind.SINH])
        self.assertEqual(list(series.divisor_factors), [surface.exceptional(1)])

    def test_even_exceptional_pairing_gives_cosh(self):
        surface = general_type(r=1)
        series = closed_form_general_type(surface, surface.algebraic_cls([0, 2, 0]))
        self.assertEqual([f.kind for f in series.factor_terms], [FactorKind.COSH])
        self.assertEqual(series.divisor_factors, ())

    def test_elliptic_constant_is_one(self):
        for p_g in (1, 2, 3):
            self.assertEqual(elliptic_constant(elliptic(p_g)), 1)

    def test_elliptic_needs_vertical_L(self):
        surface = elliptic()
        with self.assertRaises(UnsupportedClassError):
            closed_form_elliptic(surface, surface.polarization())

    def test_dolgachev_forms_agree(self):
        surface = elliptic(1, (2, 3))
        L = surface.zero()
        frame = basis_frame(surface, 12)
        ratio = closed_form_elliptic(surface, L)
        expanded = expand(ratio, frame)
        self.assertEqual(expanded, expand(ratio.exponential_form, frame))
        assembled = assemble_structure(surface, L, basic_classes_elliptic(surface))
        self.assertEqual(expanded, expand(assembled, frame))
        self.assertEqual(expanded.constant_term(), 6)
        self.assertEqual(expanded.order(), 0)

    def test_exponential_terms_of_sinh(self):
        surface = elliptic(2)
        terms = exponential_terms(closed_form_elliptic(surface, surface.zero()))
        F = surface.fiber()
        self.assertEqual(
            {(t.cls.coord("F"), t.coefficient) for t in terms},
            {(-1, Fraction(1, 2)), (1, Fraction(-1, 2))},
        )
        self.assertEqual(len(terms), 2)
        self.assertIn(F, [t.cls for t in terms])


class K3PipelineTests(SimpleTestCase):

    def test_polarized_values(self):
        surface = elliptic(h_square=2)
        series = assemble_structure(surface, surface.zero(), basic_classes_elliptic(surface))
        frame = probe_frame(surface, [("S", surface.polarization())], 10)
        expanded = expand(series, frame)
        for d in range(0, 11, 2):
            self.assertEqual(polarized_coefficient(expanded, [d]), factorial(d) // factorial(d // 2))
        self.assertEqual(polarized_coefficient(expanded, [4]), 12)


class BlowupTests(SimpleTestCase):

    def test_coherence_with_closed_form(self):
        surface = general_type()
        for L in (surface.zero(), surface.primary()):
            for parity in BlowupParity.values:
                with self.subTest(L=L.describe(), parity=parity):
                    transformed = blowup_transform(closed_form_general_type(surface, L), parity)
                    frame = two_probes(transformed.surface, 10)
                    direct = closed_form_general_type(transformed.surface, transformed.L)
                    self.assertEqual(expand(transformed, frame), expand(direct, frame))

    def test_pulled_back_reading(self):
        for surface in (general_type(r=1), elliptic(1, (2, 3))):
            series = (
                closed_form_general_type(surface, surface.zero())
                if surface.is_general_type else closed_form_elliptic(surface, surface.zero())
            )
            for parity in BlowupParity.values:
                with self.subTest(surface=str(surface), parity=parity):
                    transformed = blowup_transform(series, parity)
                    frame = basis_frame(transformed.surface, 6)
                    self.assertEqual(
                        expand(transformed, frame),
                        expand_pulled_back(series, transformed.surface, frame, parity),
                    )

    def test_odd_lift_with_plus_exceptional(self):
        surface = general_type()
        series = closed_form_general_type(surface, surface.zero())
        plus = blowup_transform(series, BlowupParity.ODD, exceptional_sign=1)
        minus = blowup_transform(series, BlowupParity.ODD)
        E = plus.surface.exceptional(1)
        self.assertEqual(plus.L, surface.lift(series.L) + E)
        frame = two_probes(plus.surface, 8)
        direct = closed_form_general_type(plus.surface, plus.L)
        self.assertEqual(expand(plus, frame), expand(direct, frame))
        # q_{L+E} = q_{(L-E)+2E} = (-1)^{E.E} q_{L-E}
        self.assertEqual(expand(plus, frame), -expand(minus, frame))

    def test_multiplicities_halve(self):
        surface = general_type()
        transformed = blowup_transform(closed_form_general_type(surface, surface.zero()), BlowupParity.EVEN)
        minimal = {abs(b.km) for b in basic_classes_general_type(surface, surface.zero())}
        blown = {abs(b.km) for b in basic_classes_general_type(transformed.surface, transformed.L)}
        self.assertEqual(blown, {m / 2 for m in minimal})

    def test_even_blow_up_of_gaussian_keeps_constant(self):
        surface = elliptic()
        transformed = blowup_transform(closed_form_elliptic(surface, surface.zero()), BlowupParity.EVEN)
        expanded = expand(transformed, basis_frame(transformed.surface, 4))
        self.assertEqual(expanded.constant_term(), 1)

    def test_odd_blow_up_raises_order_by_one(self):
        surface = general_type()
        series = closed_form_general_type(surface, surface.zero())
        order = expand(series, basis_frame(surface, 6)).order()
        transformed = blowup_transform(series, BlowupParity.ODD)
        self.assertEqual(expand(transformed, basis_frame(transformed.surface, 6)).order(), order + 1)
        self.assertEqual(list(transformed.divisor_factors), [transformed.surface.exceptional(1)])


class ParityTests(SimpleTestCase):

    def test_every_family(self):
        cases = [
            (elliptic(), [0]),
            (elliptic(2), [0]),
            (elliptic(1, (2, 3)), [0]),
            (general_type(), [0, 1]),
            (general_type(r=2), [0, 1]),
        ]
        for surface, scales in cases:
            for scale in scales:
                L = surface.primary() * scale if surface.is_general_type else surface.zero()
                if surface.r:
                    L = L + surface.exceptional(1)
                with self.subTest(surface=str(surface), L=L.describe()):
                    series = (
                        closed_form_general_type(surface, L)
                        if surface.is_general_type else closed_form_elliptic(surface, L)
                    )
                    expanded = expand(series, basis_frame(surface, 7))
                    self.assertEqual(parity_violations(expanded, series_parity(surface, L)), [])


class EvaluateTests(SimpleTestCase):

    def setUp(self):
        self.surface = elliptic(h_square=2)
        self.series = closed_form_elliptic(self.surface, self.surface.zero())
        self.frame = probe_frame(self.surface, [("S", self.surface.polarization())], 10)

    def test_degree_six(self):
        self.assertEqual(evaluate(self.series, self.frame, EvalRequest((("S", 6),), 0, 3)), 120)

    def test_degree_mismatch_is_zero(self):
        self.assertEqual(evaluate(self.series, self.frame, EvalRequest((("S", 4),), 0, 3)), 0)
        self.assertEqual(evaluate(self.series, self.frame, EvalRequest((("S", 5),), 0, 3)), 0)

    def test_point_class(self):
        self.assertEqual(evaluate(self.series, self.frame, EvalRequest((("S", 2),), 2, 3)), 8)
        self.assertEqual(evaluate(self.series, self.frame, EvalRequest((), 1, 2)), 2)


SIMPLE_TYPE_CASES = [
    # (surface factory, L coordinates over the algebraic basis, k)
    (lambda: elliptic(h_square=2), None, 3),
    (lambda: elliptic(1, (2, 3)), None, 3),
    (lambda: general_type(), [1, 0], 4),
    (lambda: general_type(r=1), [1, -1, 0], 4),
]


class SimpleTypeTests(SimpleTestCase):

    @settings(max_examples=20, deadline=None)
    @given(st.lists(small_fractions, min_size=3, max_size=3), nonzero_fractions)
    def test_point_class_recursion(self, coords, h):
        for make, L_coords, k in SIMPLE_TYPE_CASES:
            surface = make()
            L = surface.zero() if L_coords is None else surface.algebraic_cls(L_coords)
            size = len(surface.basis) - 1
            sigma = surface.algebraic_cls((coords + [0] * size)[: size - 1] + [h])
            series = (
                closed_form_general_type(surface, L)
                if surface.is_general_type else closed_form_elliptic(surface, L)
            )
            d = virtual_dim(surface, L, k)
            frame = probe_frame(surface, [("S", sigma)], d)
            with_point = evaluate(series, frame, EvalRequest((("S", d - 4),), 2, k))
            without = evaluate(series, frame, EvalRequest((("S", d - 4),), 0, k - 1))
            self.assertEqual(with_point, 4 * without)


class ExportTests(SimpleTestCase):

    def assertRoundTrip(self, series):
        exported = export_series(series)
        loaded = load_series(exported)
        self.assertEqual(loaded, series)
        self.assertEqual(
            JSONRenderer().render(export_series(loaded)),
            JSONRenderer().render(exported),
        )

    def test_elliptic_with_exponential_form(self):
        surface = elliptic(1, (2, 3))
        self.assertRoundTrip(closed_form_elliptic(surface, surface.zero()))

    def test_blown_up_general_type(self):
        surface = general_type(r=1, w=3)
        series = closed_form_general_type(surface, surface.algebraic_cls([1, 1, 0]))
        self.assertRoundTrip(blowup_transform(series, BlowupParity.ODD))

    def test_rationals_are_strings(self):
        surface = elliptic(2)
        exported = export_series(closed_form_elliptic(surface, surface.zero()))
        self.assertEqual(exported["constant"], "1/1")
        self.assertEqual(exported["metadata"]["surface"]["w"], "1/1")
