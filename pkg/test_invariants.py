#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Test Invariants Module
----------------------
Unit tests for the closed forms and the invariant sweeps.
"""

import math
import os
import sys
import logging
import unittest

# Import invariant modules
sys.path.append(os.path.dirname(os.path.abspath(__file__)))
from geometry.geom_core import GeometryError
from harmonic.harmonic_family import FamilySpec, t_grid
from harmonic.invariants import (
    TABLE2_K,
    TABLE2_N,
    ConjectureVerdict,
    QuantityId,
    QuantityKind,
    Verdict,
    apollonius_radii,
    casey_snapshot,
    conjecture_from_report,
    conjecture_verdict,
    cot_power_sums,
    cot_theta_closed,
    default_quantities,
    elementary_symmetric,
    elementary_symmetric_reports,
    evaluate,
    expected_table2_verdict,
    harmonic_column,
    measure,
    ratio_invariants,
    sum_cot_closed,
    sum_cot_sq_closed,
    sum_inv_sq_apollonius,
    sum_inv_sq_sides,
    sweep_statistics,
    table2_matrix,
)

# Configure logging
logging.basicConfig(
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    level=logging.INFO,
)
logger = logging.getLogger(__name__)

NS = (3, 4, 5, 6, 7, 8)
DS = (0.1, 0.3, 0.5, 0.7)
SAMPLES = 32


class TestClosedForms(unittest.TestCase):
    """Test cases for closed forms against hand-computed values."""

    def setUp(self):
        """Set up test environment."""
        self.spec = FamilySpec.casey(4, 0.5)
        self.snap = casey_snapshot(self.spec, 0.0)
        self.limits = (complex(0.5, 0.0), complex(2.0, 0.0))

    def test_square_values(self):
        """Test the N=4, d=0.5, t=0 member: vertices -1, 0.8 -+ 0.6i, 1."""
        self.assertAlmostEqual(sum_inv_sq_sides(self.spec), 50.0 / 9.0, places=12)
        self.assertAlmostEqual(sum_inv_sq_apollonius(self.spec), 32.0 / 9.0, places=12)
        self.assertAlmostEqual(sum_cot_sq_closed(self.spec), 32.0 / 9.0, places=12)
        self.assertAlmostEqual(sum_cot_closed(self.spec), 0.0, places=12)

        self.assertAlmostEqual(measure(QuantityId(QuantityKind.SUM_INV_SQ_SIDES), self.snap, self.limits),
                               50.0 / 9.0, places=12)
        self.assertAlmostEqual(measure(QuantityId(QuantityKind.SUM_INV_SQ_APOLLONIUS), self.snap, self.limits),
                               32.0 / 9.0, places=12)
        self.assertAlmostEqual(measure(QuantityId(QuantityKind.SUM_SQ_SIDES_OVER_A), self.snap, self.limits),
                               4.0 / 0.6, places=12)
        self.assertAlmostEqual(measure(QuantityId(QuantityKind.AREA), self.snap, self.limits), 1.2, places=12)

    def test_cotangents_of_square(self):
        """Test cot theta = 4/3, 0, -4/3, 0 at the four vertices."""
        expected = (4.0 / 3.0, 0.0, -4.0 / 3.0, 0.0)
        for k, (angle, value) in enumerate(zip(self.snap.angles, expected)):
            self.assertAlmostEqual(1.0 / math.tan(angle), value, places=12)
            self.assertAlmostEqual(cot_theta_closed(self.spec, 0.0, k), value, places=12)

    def test_regular_family(self):
        """Test the d = 0 values: 1 for triangles, N / (4 sin^2 a) in general."""
        self.assertAlmostEqual(sum_inv_sq_sides(FamilySpec.casey(3, 0.0)), 1.0, places=12)
        for n in NS:
            expected = n / (4.0 * math.sin(math.pi / n) ** 2)
            self.assertAlmostEqual(sum_inv_sq_sides(FamilySpec.casey(n, 0.0)), expected, places=12)
            self.assertEqual(sum_inv_sq_apollonius(FamilySpec.casey(n, 0.0)), 0.0)

    def test_cot_theta_closed_form(self):
        """Test the closed form for every vertex cotangent over a sweep."""
        for n in NS:
            for d in (0.3, 0.6):
                spec = FamilySpec.casey(n, d)
                for t in t_grid(n, 16):
                    snap = casey_snapshot(spec, t)
                    for k, angle in enumerate(snap.angles):
                        value = cot_theta_closed(spec, t, k)
                        self.assertLess(abs(1.0 / math.tan(angle) - value), 1e-10 * max(1.0, abs(value)))

    def test_apollonius_circles(self):
        """Test that every Apollonius circle passes through its vertex and both limiting points."""
        radii = apollonius_radii(self.snap, *self.limits)
        self.assertEqual(len(radii), 4)
        self.assertAlmostEqual(math.fsum(1.0 / r ** 2 for r in radii if math.isfinite(r)), 32.0 / 9.0, places=12)
        self.assertEqual(radii.count(math.inf), 2)
        self.assertEqual(apollonius_radii(self.snap, self.limits[0], None), [math.inf] * 4)

    def test_elementary_symmetric(self):
        self.assertEqual(list(elementary_symmetric([1.0, 2.0, 3.0], 3)), [1.0, 6.0, 11.0, 6.0])
        self.assertEqual(list(elementary_symmetric([2.0, 3.0], 3)), [1.0, 5.0, 6.0, 0.0])


class TestSweeps(unittest.TestCase):
    """Test cases for sweep verdicts and closed-form matching."""

    def test_sidelength_and_apollonius_sums(self):
        """Test the two reciprocal-square sums on the full grid."""
        for n in NS:
            for d in DS:
                spec = FamilySpec.casey(n, d)
                for kind in (QuantityKind.SUM_INV_SQ_SIDES, QuantityKind.SUM_INV_SQ_APOLLONIUS):
                    report = evaluate(spec, QuantityId(kind), SAMPLES)
                    self.assertEqual(report.verdict, Verdict.INVARIANT, f"{kind.value} N={n} d={d}")
                    self.assertTrue(report.closed_form_ok, f"{kind.value} N={n} d={d}")
                    self.assertLess(report.closed_form_dev, 1e-9)

    def test_regular_apollonius_sum_is_zero(self):
        report = evaluate(FamilySpec.casey(5, 0.0), QuantityId(QuantityKind.SUM_INV_SQ_APOLLONIUS), 8)

        self.assertEqual(report.verdict, Verdict.ZERO)
        self.assertTrue(report.closed_form_ok)

    def test_ratio_invariants(self):
        """Test the area ratios on the full grid, the sin 2theta sum vanishing for the square family."""
        for n in NS:
            for d in DS:
                reports = {r.quantity.kind: r for r in ratio_invariants(FamilySpec.casey(n, d), samples=16)}
                self.assertEqual(reports[QuantityKind.SUM_SQ_SIDES_OVER_A].verdict, Verdict.INVARIANT,
                                 f"N={n} d={d}")
                expected = Verdict.ZERO if n == 4 else Verdict.INVARIANT
                for kind in (QuantityKind.SUM_SIN2THETA_OVER_A, QuantityKind.SUM_SIN2THETA_OVER_SUM_SQ):
                    self.assertEqual(reports[kind].verdict, expected, f"{kind.value} N={n} d={d}")

    def test_cot_sums(self):
        """Test sum cot and sum cot^2 against their closed forms."""
        for n in NS:
            for d in (0.2, 0.6):
                reports = cot_power_sums(FamilySpec.casey(n, d), kmax=2, samples=SAMPLES)
                for report in reports:
                    self.assertTrue(report.verdict.is_conserved, str(report.quantity))
                    self.assertTrue(report.closed_form_ok, str(report.quantity))

    def test_cot_power_table(self):
        """Test the Table of sum cot^k verdicts for N = 3..8, k = 1..7."""
        matrix = table2_matrix(0.5, samples=SAMPLES)

        self.assertEqual(len(matrix), len(TABLE2_N) * len(TABLE2_K))
        for (n, k), verdict in matrix.items():
            self.assertEqual(verdict, expected_table2_verdict(n, k), f"N={n} k={k}")
        self.assertEqual(matrix[(4, 3)], Verdict.ZERO)
        self.assertEqual(matrix[(3, 3)], Verdict.VARIES)

    def test_elementary_symmetric_functions(self):
        """Test e_1..e_(N-1) conserved and e_N varying at d = 0.4."""
        for n in NS:
            reports = elementary_symmetric_reports(FamilySpec.casey(n, 0.4), samples=SAMPLES)
            self.assertEqual(len(reports), n)
            for report in reports[:-1]:
                self.assertTrue(report.verdict.is_conserved, f"{report.quantity} N={n}")
            self.assertEqual(reports[-1].verdict, Verdict.VARIES, f"e_{n} N={n}")
            self.assertGreater(reports[-1].relative_dev, 1e-3)

    def test_negative_controls(self):
        """Test that perimeter and area vary for d != 0."""
        for n in (3, 5, 8):
            spec = FamilySpec.casey(n, 0.3)
            for kind in (QuantityKind.PERIMETER, QuantityKind.AREA):
                self.assertEqual(evaluate(spec, QuantityId(kind), SAMPLES).verdict, Verdict.VARIES)

    def test_harmonic_column(self):
        reports = harmonic_column(FamilySpec.casey(5, 0.4), samples=SAMPLES)
        by_name = {str(r.quantity): r for r in reports}

        self.assertEqual(len(reports), 8)
        self.assertEqual(by_name["sides2_over_area"].verdict, Verdict.INVARIANT)
        self.assertTrue(by_name["sides2_over_area"].closed_form_ok)
        self.assertEqual(by_name["perimeter"].verdict, Verdict.VARIES)
        self.assertEqual(by_name["area"].verdict, Verdict.VARIES)

    def test_validate_esp_order(self):
        with self.assertRaisesRegex(GeometryError, "parameter out of range"):
            evaluate(FamilySpec.casey(4, 0.3), QuantityId(QuantityKind.ELEM_SYM, 5), 4)


class TestReports(unittest.TestCase):
    """Test cases for quantity ids, sweep statistics and verdicts."""

    def test_parse_quantity(self):
        """Test parsing quantity ids from their text form."""
        qid = QuantityId.parse("cotpow:3")

        self.assertEqual(qid.kind, QuantityKind.SUM_COT_POW)
        self.assertEqual(qid.k, 3)
        self.assertEqual(str(qid), "cotpow:3")
        self.assertEqual(QuantityId.parse("area"), QuantityId(QuantityKind.AREA))

    def test_parse_errors(self):
        for text in ("bogus", "cotpow", "area:2", "esp:0", ""):
            with self.assertRaises(GeometryError, msg=text):
                QuantityId.parse(text)

    def test_sweep_statistics_verdicts(self):
        """Test the Invariant, Zero, Varies and Inconclusive verdicts."""
        ts = (0.0, 0.1)

        self.assertEqual(sweep_statistics("c", ts, (2.0, 2.0)).verdict, Verdict.INVARIANT)
        self.assertEqual(sweep_statistics("z", ts, (1e-12, -1e-12)).verdict, Verdict.ZERO)
        self.assertEqual(sweep_statistics("v", ts, (1.0, 1.001)).verdict, Verdict.VARIES)
        self.assertEqual(sweep_statistics("i", ts, (1.0, 1.0 + 1e-6)).verdict, Verdict.INCONCLUSIVE)

    def test_closed_form_mismatch(self):
        report = sweep_statistics("c", (0.0, 0.1), (2.0, 2.0), closed_form=2.5)

        self.assertFalse(report.closed_form_ok)
        self.assertFalse(report.passed)
        self.assertAlmostEqual(report.closed_form_dev, 0.2, places=12)

    def test_empty_sweep(self):
        with self.assertRaises(GeometryError):
            sweep_statistics("e", (), ())

    def test_conjecture_verdicts(self):
        self.assertEqual(conjecture_verdict(1e-9), ConjectureVerdict.SUPPORTED)
        self.assertEqual(conjecture_verdict(1e-5), ConjectureVerdict.INCONCLUSIVE)
        self.assertEqual(conjecture_verdict(1e-2), ConjectureVerdict.VIOLATED)
        zero = sweep_statistics("z", (0.0,), (0.0,))
        self.assertEqual(conjecture_from_report(zero), ConjectureVerdict.SUPPORTED)

    def test_expected_table(self):
        self.assertEqual(expected_table2_verdict(4, 3), Verdict.ZERO)
        self.assertEqual(expected_table2_verdict(4, 2), Verdict.INVARIANT)
        self.assertEqual(expected_table2_verdict(5, 4), Verdict.INVARIANT)
        self.assertEqual(expected_table2_verdict(5, 5), Verdict.VARIES)

    def test_default_quantities(self):
        quantities = default_quantities(4)
        labels = [str(q) for q in quantities]

        self.assertEqual(len(quantities), 8 + 6 + 4)
        self.assertIn("cotpow:6", labels)
        self.assertIn("esp:4", labels)
        self.assertNotIn("esp:5", labels)


def run_tests():
    """Run all tests."""
    loader = unittest.TestLoader()
    test_suite = unittest.TestSuite()
    for case in (TestClosedForms, TestSweeps, TestReports):
        test_suite.addTests(loader.loadTestsFromTestCase(case))

    test_runner = unittest.TextTestRunner(verbosity=2)
    test_result = test_runner.run(test_suite)

    return test_result.wasSuccessful()


if __name__ == "__main__":
    success = run_tests()
    sys.exit(0 if success else 1)
