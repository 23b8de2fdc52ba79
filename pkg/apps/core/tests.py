from fractions import Fraction

from django.test import SimpleTestCase
from hypothesis import given
from hypothesis import strategies as st

from apps.core.exceptions import (
    DivisibilityError,
    OrderUndeterminedError,
    SpecificationError,
    UnsupportedSurfaceError,
)
from apps.core.serializers import RationalField, flatten_errors
from apps.core.utils import format_decimal, format_fraction, is_integral, to_fraction


class RationalParsingTests(SimpleTestCase):

    def test_accepted_forms(self):
        self.assertEqual(to_fraction("3/2"), Fraction(3, 2))
        self.assertEqual(to_fraction(" -7 "), Fraction(-7))
        self.assertEqual(to_fraction(4), Fraction(4))
        self.assertEqual(to_fraction(Fraction(1, 3)), Fraction(1, 3))

    def test_rejected_forms(self):
        for value in ("0.5", "1e3", "1/0", "x", 0.5, True, None):
            with self.subTest(value=value):
                with self.assertRaises(SpecificationError):
                    to_fraction(value)

    @given(st.fractions(max_denominator=1000))
    def test_formatted_value_parses_back(self, value):
        self.assertEqual(to_fraction(format_fraction(value)), value)

    def test_denominator_always_written(self):
        self.assertEqual(format_fraction(3), "3/1")
        self.assertEqual(RationalField().to_representation(Fraction(-2, 4)), "-1/2")

    def test_is_integral(self):
        self.assertTrue(is_integral(Fraction(4, 2)))
        self.assertFalse(is_integral(Fraction(1, 2)))


class DecimalTests(SimpleTestCase):

    def test_marked_and_rounded(self):
        self.assertEqual(format_decimal(Fraction(2, 3), 3), "~0.667")
        self.assertEqual(format_decimal(Fraction(-1, 8), 2), "~-0.13")
        self.assertEqual(format_decimal(Fraction(-1, 1000), 2), "~0.00")
        self.assertEqual(format_decimal(Fraction(7, 2), 0), "~4")


class FlattenErrorsTests(SimpleTestCase):

    def test_nested_paths(self):
        detail = {
            "surface": {"p_g": ["Too small."]},
            "probes": [{}, {"coords": ["Bad."]}],
            "non_field_errors": ["Broken."],
        }
        self.assertEqual(
            flatten_errors(detail),
            ["surface.p_g: Too small.", "probes.1.coords: Bad.", "job: Broken."],
        )


class ExitCodeTests(SimpleTestCase):

    def test_families(self):
        self.assertEqual(SpecificationError("x").exit_code, 1)
        self.assertEqual(UnsupportedSurfaceError("x").exit_code, 1)
        self.assertEqual(OrderUndeterminedError("x").exit_code, 2)
        self.assertEqual(DivisibilityError("x").exit_code, 3)

    def test_context_is_kept(self):
        exc = UnsupportedSurfaceError("gcd rule", multiplicities=(2, 4))
        self.assertEqual(exc.context, {"multiplicities": (2, 4)})
        self.assertEqual(str(exc), "gcd rule")
