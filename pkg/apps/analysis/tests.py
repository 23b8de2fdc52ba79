from contextlib import nullcontext
from fractions import Fraction
from itertools import product

from django.test import SimpleTestCase

from apps.analysis.models import LOWER_BOUND_ASSUMPTION, CaseMod4, Specialization, WallVerdict
from apps.analysis.serializers import ExistenceReportSerializer, TauRankReportSerializer
from apps.analysis.utils import (
    certificate_constant,
    existence_bound,
    odd_polarization_on_blowup,
    tau_certificate,
    tau_rank,
    wall_check,
)
from apps.core.exceptions import DegreeBookkeepingError, SpecificationError
from apps.surfaces.models import SurfaceData, SurfaceVariant
from apps.surfaces.utils import build_surface


def general_type(p_g=2, K_sq=1, r=0, **kwargs):
    return build_surface(
        SurfaceData(SurfaceVariant.GENERAL_TYPE, p_g, K_min_sq=K_sq, num_blowups=r), **kwargs
    )


def elliptic(p_g=1, multiplicities=(), **kwargs):
    return build_surface(
        SurfaceData(SurfaceVariant.ELLIPTIC, p_g, multiplicities=multiplicities), **kwargs
    )


def all_odd(surface):
    """K_min + E_1 + ... + E_r: every L.E_i is odd."""
    L = surface.primary()
    for E in surface.exceptionals():
        L = L + E
    return L


class ExistenceBoundTests(SimpleTestCase):

    def test_minimal_general_type(self):
        surface = general_type()
        report = existence_bound(surface, surface.primary(), 6)
        self.assertEqual(report.order_n, 0)
        self.assertEqual(report.d_upper, 2)
        self.assertEqual(report.k_at_bound, 3)
        self.assertEqual(report.case_mod4, CaseMod4.ORDER_PLUS_TWO)
        self.assertEqual(report.specialization, Specialization.GENERAL_TYPE)
        self.assertEqual(report.closed_bound, 3)
        self.assertTrue(report.within_closed_bound)
        self.assertEqual(report.d_lower_remark, -9)
        self.assertEqual(report.order_after_blowup, 1)
        self.assertIn(LOWER_BOUND_ASSUMPTION, report.assumptions)

    def test_general_type_sweep(self):
        # Every parity pattern of L.E_i for r = 0..4: E_i enters L with weight 1 (odd) or 2 (even).
        for r in range(5):
            surface = general_type(p_g=3, K_sq=2, r=r)
            for weights in product((1, 2), repeat=r):
                L = surface.primary()
                for weight, E in zip(weights, surface.exceptionals()):
                    L = L + E * weight
                odd = weights.count(1)
                with self.subTest(r=r, weights=weights):
                    report = existence_bound(surface, L, odd + 1)
                    self.assertEqual(report.order_n, odd)
                    self.assertEqual(report.closed_bound, odd + 3)
                    self.assertLessEqual(report.d_upper, odd + 3)
                    self.assertTrue(report.within_closed_bound)
                    self.assertEqual(report.order_after_blowup, odd + 1)
                    self.assertIsNotNone(report.k_at_bound)

    def test_general_type_reaches_closed_bound(self):
        surface = general_type()
        report = existence_bound(surface, surface.zero(), 4)
        self.assertEqual(report.order_n, 1)
        self.assertEqual(report.case_mod4, CaseMod4.ORDER_PLUS_TWO)
        self.assertEqual(report.d_upper, 3)
        self.assertEqual(report.d_upper, report.closed_bound)

    def test_elliptic_sweep(self):
        for p_g in (1, 2, 3):
            for multiplicities in ((), (2, 3), (3, 5), (2, 3, 5)):
                surface = elliptic(p_g, multiplicities)
                closed_bound = len(multiplicities) + p_g - 1
                within = len(multiplicities) >= 2
                with self.subTest(p_g=p_g, multiplicities=multiplicities):
                    logs = nullcontext() if within else self.assertLogs("apps.analysis.utils", "WARNING")
                    with logs:
                        report = existence_bound(surface, surface.zero(), p_g + 1)
                    self.assertEqual(report.order_n, p_g - 1)
                    self.assertEqual(report.d_upper, p_g + 1)
                    self.assertEqual(report.closed_bound, closed_bound)
                    self.assertEqual(report.within_closed_bound, within)
                    self.assertEqual(report.specialization, Specialization.ELLIPTIC)
                    self.assertIsNone(report.d_lower_remark)
                    self.assertNotIn(LOWER_BOUND_ASSUMPTION, report.assumptions)

    def test_elliptic_two_fibres_reach_closed_bound(self):
        for p_g in (1, 2, 3):
            surface = elliptic(p_g, (2, 3))
            with self.subTest(p_g=p_g):
                report = existence_bound(surface, surface.zero(), p_g + 1)
                self.assertEqual(report.d_upper, report.closed_bound)

    def test_elliptic_without_fibres_exceeds_closed_bound(self):
        surface = elliptic()
        with self.assertLogs("apps.analysis.utils", "WARNING"):
            report = existence_bound(surface, surface.zero(), 4)
        self.assertEqual(report.d_upper, 2)
        self.assertEqual(report.closed_bound, 0)
        self.assertFalse(report.within_closed_bound)

    def test_serializes(self):
        surface = general_type()
        data = ExistenceReportSerializer(existence_bound(surface, surface.primary(), 6)).data
        self.assertEqual(data["case_mod4"], "n_plus_2")
        self.assertEqual(data["d_upper"], 2)


class WallCheckTests(SimpleTestCase):

    def test_odd_pairing_is_good(self):
        surface = general_type()
        self.assertEqual(wall_check(surface, surface.polarization(), surface.primary()), WallVerdict.GOOD)

    def test_even_pairing_is_unknown(self):
        surface = general_type(h_pairings=[2])
        self.assertEqual(wall_check(surface, surface.polarization(), surface.primary()), WallVerdict.UNKNOWN)

    def test_fractional_polarization_is_unknown(self):
        surface = general_type()
        H = surface.polarization() * Fraction(1, 3)
        self.assertEqual(wall_check(surface, H, surface.primary() * 3), WallVerdict.UNKNOWN)

    def test_blow_up_makes_pairing_odd(self):
        surface = general_type(h_pairings=[2], h_square=3)
        for lam in (1, 2, 3):
            with self.subTest(lam=lam):
                blown, L_tilde, verdict = odd_polarization_on_blowup(surface, surface.primary(), lam)
                self.assertEqual(verdict, WallVerdict.GOOD)
                self.assertEqual(blown.pair(blown.polarization(), L_tilde), 4 * lam - 1)
                self.assertEqual(blown.self_int(blown.polarization()), 12 * lam * lam - 1)
                self.assertEqual(blown.pair(L_tilde, blown.exceptional(1)), 1)

    def test_lam_must_be_positive(self):
        surface = general_type()
        with self.assertRaises(SpecificationError):
            odd_polarization_on_blowup(surface, surface.primary(), 0)


class TauCertificateTests(SimpleTestCase):

    def test_constant(self):
        self.assertEqual(certificate_constant(2, 0), 2)
        self.assertEqual(certificate_constant(4, 2), 4)
        self.assertEqual(certificate_constant(6, 2), 24)

    def test_minimal_general_type(self):
        surface = general_type()
        certificate = tau_certificate(surface, surface.primary(), 3)
        self.assertEqual(certificate.value, 2)
        self.assertEqual(certificate.expected, 2)
        self.assertIsNone(certificate.vanishing)

    def test_two_divisors(self):
        surface = general_type(r=2, h_pairings=[1, 1, 1])
        certificate = tau_certificate(surface, all_odd(surface), 3)
        self.assertEqual(certificate.value, 4)
        self.assertEqual(certificate.expected, 4)
        self.assertEqual(certificate.vanishing, 0)
        self.assertEqual(len(certificate.divisors), 2)

    def test_probe_weight_scaling(self):
        surface = general_type(r=2, h_pairings=[1, 1, 1])
        L = all_odd(surface)
        base = tau_certificate(surface, L, 3)
        scaled = tau_certificate(surface, L, 3, w=4)
        # d - e = 2
        self.assertEqual(scaled.value, 4 * base.value)
        self.assertEqual(scaled.value, scaled.expected)

    def test_canonical_divisor(self):
        surface = general_type()
        certificate = tau_certificate(surface, surface.zero(), 3, canonical=True)
        self.assertEqual(certificate.value, -2)
        self.assertEqual(certificate.expected, -2)
        self.assertEqual(certificate.divisors, (surface.primary(),))

    def test_parity_mismatch(self):
        surface = general_type()
        with self.assertRaises(DegreeBookkeepingError):
            tau_certificate(surface, surface.zero(), 3)

    def test_elliptic_with_fibre_divisor(self):
        surface = elliptic(2)
        for k in (3, 4):
            with self.subTest(k=k):
                certificate = tau_certificate(surface, surface.zero(), k)
                self.assertEqual(certificate.value, certificate.expected)
                self.assertNotEqual(certificate.value, 0)


class TauRankTests(SimpleTestCase):

    def test_elliptic_sweep(self):
        for p_g in (1, 2):
            for multiplicities in ((), (2, 3)):
                surface = elliptic(p_g, multiplicities)
                for k in range(p_g + 1, p_g + 5):
                    with self.subTest(p_g=p_g, multiplicities=multiplicities, k=k):
                        report = tau_rank(surface, surface.zero(), k)
                        self.assertFalse(report.degenerate)
                        self.assertEqual(report.e_divisors, p_g - 1)
                        self.assertEqual(report.d, 4 * k - 3 * (1 + p_g))
                        self.assertEqual(report.rank, 2 * k - 2 * p_g - 1)
                        self.assertEqual(report.certificate_value, report.certificate_expected)
                        self.assertNotEqual(report.certificate_value, 0)

    def test_dolgachev_value(self):
        surface = elliptic(1, (2, 3))
        self.assertEqual(tau_rank(surface, surface.zero(), 2).certificate_value, 6)

    def test_elliptic_p_g_two(self):
        surface = elliptic(2)
        report = tau_rank(surface, surface.zero(), 4)
        self.assertEqual(report.e_divisors, 1)
        self.assertEqual(report.d, 7)
        self.assertEqual(report.rank, 3)

    def test_general_type(self):
        surface = general_type()
        report = tau_rank(surface, surface.primary(), 3)
        self.assertEqual((report.d, report.e_divisors, report.rank), (2, 0, 1))
        self.assertEqual(report.certificate_value, 2)
        self.assertEqual(report.rank_after_blowup, 1)

    def test_general_type_three_divisors(self):
        surface = general_type(r=3, h_pairings=[1, 1, 1, 1])
        for k in (3, 4):
            with self.subTest(k=k):
                report = tau_rank(surface, all_odd(surface), k)
                self.assertEqual(report.e_divisors, 3)
                self.assertEqual(report.d, 4 * k - 7)
                self.assertEqual(report.rank, 2 * k - 5)
                self.assertEqual(report.certificate_value, report.certificate_expected)
                self.assertNotEqual(report.certificate_value, 0)
                self.assertEqual(report.certificate_vanishing, 0)

    def test_odd_dimension_uses_canonical_divisor(self):
        surface = general_type()
        report = tau_rank(surface, surface.zero(), 3)
        self.assertEqual((report.d, report.rank), (3, 1))
        self.assertEqual(report.certificate_value, -2)

    def test_degenerate(self):
        surface = general_type(r=2, h_pairings=[1, 1, 1])
        report = tau_rank(surface, all_odd(surface), 2)
        self.assertTrue(report.degenerate)
        self.assertEqual(report.rank, 0)
        self.assertIsNone(report.certificate_value)
        self.assertIsNone(TauRankReportSerializer(report).data["certificate_value"])

    def test_serializes_rationals(self):
        surface = general_type(r=2, h_pairings=[1, 1, 1])
        data = TauRankReportSerializer(tau_rank(surface, all_odd(surface), 3)).data
        self.assertEqual(data["certificate_value"], "4/1")
        self.assertEqual(data["certificate_vanishing"], "0/1")
        self.assertEqual(data["divisors"], ["E1", "E2"])
