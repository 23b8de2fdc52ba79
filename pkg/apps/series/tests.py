from fractions import Fraction
from math import factorial

from django.test import SimpleTestCase
from hypothesis import given, settings
from hypothesis import strategies as st

from apps.core.exceptions import (
    DimensionError,
    DivisibilityError,
    IncompatibleFrameError,
    NotNilpotentError,
    OrderUndeterminedError,
    SpecificationError,
    TruncationError,
)
from apps.series.algebra import (
    COSH,
    EXP,
    SINH,
    exact_divide,
    exp_like,
    exp_of_linear,
    linear_form,
    polarized_coefficient,
    quadratic_form,
)
from apps.series.models import ExpandedSeries, ProbeFrame


def single(square=0, truncation=12, name="t"):
    return ProbeFrame(names=(name,), gram=((square,),), truncation=truncation)


def pair_frame(truncation=4):
    return ProbeFrame(names=("a", "b"), gram=((1, 0), (0, -1)), truncation=truncation)


small_fractions = st.fractions(min_value=-3, max_value=3, max_denominator=5)


def monomials(size, truncation):
    if size == 1:
        return [(d,) for d in range(truncation + 1)]
    out = []
    for first in range(truncation + 1):
        for rest in monomials(size - 1, truncation - first):
            out.append((first,) + rest)
    return out


def series_from(frame, coefficients):
    return ExpandedSeries(frame, dict(zip(monomials(frame.size, frame.truncation), coefficients)))


class ProbeFrameTests(SimpleTestCase):

    def test_rejects_non_symmetric_gram(self):
        with self.assertRaises(SpecificationError):
            ProbeFrame(names=("a", "b"), gram=((1, 2), (3, 1)), truncation=2)

    def test_rejects_ragged_gram(self):
        with self.assertRaises(DimensionError):
            ProbeFrame(names=("a", "b"), gram=((1, 0),), truncation=2)


class LinearFormTests(SimpleTestCase):

    def test_coefficients(self):
        frame = pair_frame()
        form = linear_form(frame, [3, Fraction(-1, 2)])
        self.assertEqual(form.coefficient((1, 0)), 3)
        self.assertEqual(form.coefficient((0, 1)), Fraction(-1, 2))
        self.assertEqual(form.order(), 1)

    def test_zero_pairings_give_zero_series(self):
        self.assertTrue(linear_form(pair_frame(), [0, 0]).is_zero())

    def test_length_mismatch(self):
        with self.assertRaises(DimensionError):
            linear_form(pair_frame(), [1, 2, 3])


class RingOpsTests(SimpleTestCase):

    def test_product_is_pruned_at_truncation(self):
        frame = single(truncation=3)
        t = linear_form(frame, [1])
        self.assertTrue((t * t * t * t).is_zero())
        self.assertEqual((t * t * t).coefficient((3,)), 1)

    def test_frames_must_match(self):
        with self.assertRaises(IncompatibleFrameError):
            linear_form(single(truncation=3), [1]) + linear_form(single(truncation=4), [1])

    @settings(max_examples=25, deadline=None)
    @given(st.lists(small_fractions, min_size=15, max_size=15),
           st.lists(small_fractions, min_size=15, max_size=15))
    def test_multiplication_commutes(self, left, right):
        frame = pair_frame()
        a, b = series_from(frame, left), series_from(frame, right)
        self.assertEqual(a * b, b * a)

    def test_scalar_multiple(self):
        frame = single(truncation=2)
        self.assertEqual(linear_form(frame, [2]).scale(Fraction(1, 2)), linear_form(frame, [1]))


class ExpLikeTests(SimpleTestCase):

    def test_gaussian_on_square_two(self):
        frame = single(square=2, truncation=4)
        gaussian = exp_like(quadratic_form(frame))
        self.assertEqual(gaussian, ExpandedSeries(frame, {(0,): 1, (2,): 1, (4,): Fraction(1, 2)}))

    def test_exp_of_linear_multinomial_coefficients(self):
        frame = pair_frame(truncation=6)
        series = exp_of_linear(frame, [2, Fraction(-1, 3)])
        # 2^2/2! * (-1/3)
        self.assertEqual(series.coefficient((2, 1)), Fraction(-2, 3))
        self.assertEqual(series.coefficient((0, 3)), Fraction(-1, 162))
        self.assertEqual(series.coefficient((4, 2)), Fraction(1, 27))
        self.assertEqual(series.constant_term(), 1)

    def test_zero_argument(self):
        frame = pair_frame()
        zero = ExpandedSeries.zero(frame)
        self.assertEqual(exp_like(zero), ExpandedSeries.one(frame))
        self.assertEqual(exp_like(zero, COSH), ExpandedSeries.one(frame))
        self.assertTrue(exp_like(zero, SINH).is_zero())

    def test_empty_frame(self):
        frame = ProbeFrame(names=(), gram=(), truncation=3)
        self.assertEqual(ExpandedSeries.one(frame) * 5, ExpandedSeries.constant(frame, 5))
        self.assertEqual(exp_like(ExpandedSeries.zero(frame)), ExpandedSeries.one(frame))

    def test_sinh_is_odd_cosh_is_even(self):
        frame = single(truncation=9)
        t = linear_form(frame, [1])
        self.assertTrue(all(d % 2 for d in exp_like(t, SINH).degrees()))
        self.assertTrue(all(d % 2 == 0 for d in exp_like(t, COSH).degrees()))

    def test_constant_term_is_rejected(self):
        frame = single(truncation=3)
        with self.assertRaises(NotNilpotentError):
            exp_like(linear_form(frame, [1]) + 1)


coefficient_lists = st.lists(small_fractions, min_size=15, max_size=15)
nilpotent_lists = st.lists(small_fractions, min_size=14, max_size=14)


def nilpotent_from(frame, coefficients):
    return series_from(frame, [0] + list(coefficients))


class SeriesIdentityTests(SimpleTestCase):

    @settings(max_examples=20, deadline=None)
    @given(coefficient_lists, coefficient_lists, coefficient_lists)
    def test_multiplication_is_associative(self, x, y, z):
        frame = pair_frame()
        a, b, c = series_from(frame, x), series_from(frame, y), series_from(frame, z)
        self.assertEqual((a * b) * c, a * (b * c))

    @settings(max_examples=20, deadline=None)
    @given(coefficient_lists, coefficient_lists, coefficient_lists)
    def test_multiplication_distributes(self, x, y, z):
        frame = pair_frame()
        a, b, c = series_from(frame, x), series_from(frame, y), series_from(frame, z)
        self.assertEqual(a * (b + c), a * b + a * c)

    @settings(max_examples=20, deadline=None)
    @given(nilpotent_lists, nilpotent_lists)
    def test_exp_of_sum_is_product(self, x, y):
        frame = pair_frame()
        a, b = nilpotent_from(frame, x), nilpotent_from(frame, y)
        self.assertEqual(exp_like(a + b, EXP), exp_like(a, EXP) * exp_like(b, EXP))

    @settings(max_examples=20, deadline=None)
    @given(nilpotent_lists)
    def test_exp_times_exp_of_negation_is_one(self, x):
        frame = pair_frame()
        a = nilpotent_from(frame, x)
        self.assertEqual(exp_like(a) * exp_like(-a), ExpandedSeries.one(frame))

    @settings(max_examples=20, deadline=None)
    @given(nilpotent_lists)
    def test_hyperbolic_identity(self, x):
        frame = pair_frame()
        a = nilpotent_from(frame, x)
        cosh, sinh = exp_like(a, COSH), exp_like(a, SINH)
        self.assertEqual(cosh * cosh - sinh * sinh, ExpandedSeries.one(frame))
        self.assertEqual(cosh + sinh, exp_like(a))


class ExactDivideTests(SimpleTestCase):

    def test_sinh_ratio_identity(self):
        for p in range(2, 8):
            with self.subTest(p=p):
                work = single(truncation=13)
                numerator = exp_like(linear_form(work, [p]), SINH)
                denominator = exp_like(linear_form(work, [1]), SINH)
                quotient = exact_divide(numerator, denominator)

                frame = single(truncation=12)
                expected = ExpandedSeries(frame, {
                    (n,): sum(Fraction((2 * a - p + 1) ** n, factorial(n)) for a in range(p))
                    for n in range(13)
                })
                self.assertEqual(quotient, expected)

    @settings(max_examples=50, deadline=None)
    @given(st.lists(small_fractions, min_size=15, max_size=15),
           st.lists(small_fractions, min_size=15, max_size=15),
           st.sampled_from([0, 1]))
    def test_divide_round_trip(self, left, right, shift):
        frame = pair_frame()
        a = series_from(frame, left)
        b = series_from(frame, right)
        # Give b a known nonzero lowest part of degree `shift`.
        lowest = ExpandedSeries.one(frame) if shift == 0 else linear_form(frame, [1, 2])
        b = lowest + ExpandedSeries(frame, {m: c for m, c in b.terms.items() if sum(m) > shift})
        quotient = exact_divide(a * b, b)
        self.assertEqual(quotient, a.truncate(frame.truncation - shift))

    def test_inexact_division(self):
        frame = pair_frame()
        with self.assertRaises(DivisibilityError):
            exact_divide(linear_form(frame, [1, 0]), linear_form(frame, [0, 1]))

    def test_zero_denominator(self):
        frame = pair_frame()
        with self.assertRaises(DivisibilityError):
            exact_divide(ExpandedSeries.one(frame), ExpandedSeries.zero(frame))


class GradingTests(SimpleTestCase):

    def test_order_of_zero_series(self):
        with self.assertRaises(OrderUndeterminedError):
            ExpandedSeries.zero(single()).order()

    def test_polarized_coefficient(self):
        frame = single(square=2, truncation=10)
        gaussian = exp_like(quadratic_form(frame))
        self.assertEqual(polarized_coefficient(gaussian, [4]), 12)
        self.assertEqual(polarized_coefficient(gaussian, [3]), 0)

    def test_polarized_coefficient_beyond_truncation(self):
        frame = single(truncation=2)
        with self.assertRaises(TruncationError):
            polarized_coefficient(ExpandedSeries.one(frame), [3])

    def test_homogeneous_part(self):
        frame = single(square=2, truncation=6)
        gaussian = exp_like(quadratic_form(frame))
        self.assertEqual(dict(gaussian.homogeneous_part(2).terms), {(2,): 1})
