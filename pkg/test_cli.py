#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Test Laboratory Command Line
----------------------------
End-to-end tests for harmonic_lab: exit codes, JSON and CSV reports, the
configuration layer and SVG figures.
"""

import math
import os
import sys
import logging
import json
import unittest
import tempfile
import shutil

# Import laboratory modules
sys.path.append(os.path.dirname(os.path.abspath(__file__)))
from harmonic.harmonic_family import FamilySpec
from harmonic_lab import EXIT_CONFIG, EXIT_OK, main
from lab_config import DEFAULTS, LabConfig
import figures
import reports

# Configure logging
logging.basicConfig(
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    level=logging.INFO,
)
logger = logging.getLogger(__name__)


class CliTestCase(unittest.TestCase):
    """Shared temporary directory and helpers."""

    def setUp(self):
        """Set up test environment."""
        self.test_dir = tempfile.mkdtemp()
        self.out = os.path.join(self.test_dir, "out.json")

    def tearDown(self):
        """Clean up test environment."""
        shutil.rmtree(self.test_dir)

    def run_json(self, *argv):
        code = main(list(argv) + ["--out", self.out])
        self.assertEqual(code, EXIT_OK, f"{argv} exited with {code}")
        with open(self.out, "r", encoding="utf-8") as f:
            return json.load(f)


class TestConstruct(CliTestCase):
    """Test cases for the construct command."""

    def test_casey_frame(self):
        doc = self.run_json("construct", "--n", "4", "--casey-d", "0.5", "--t", "0")

        self.assertEqual(doc["schema_version"], reports.SCHEMA_VERSION)
        self.assertEqual(doc["command"], "construct")
        self.assertEqual(doc["family"]["frame"], "casey")
        first = doc["casey_vertices"][0]
        self.assertAlmostEqual(first[0], -1.0, places=12)
        self.assertAlmostEqual(first[1], 0.0, places=12)
        self.assertLess(doc["checks"]["symmedian_residual"], 1e-9)
        self.assertLess(doc["checks"]["involution"], 1e-9)
        self.assertLess(doc["checks"]["reciprocity"], 1e-9)

    def test_negative_parameter_is_mirrored(self):
        doc = self.run_json("construct", "--n", "5", "--x0", "-0.3")
        self.assertEqual(doc["family"]["param"], 0.3)

    def test_allow_negative(self):
        doc = self.run_json("construct", "--n", "5", "--x0", "-0.3", "--allow-negative")
        self.assertEqual(doc["family"]["param"], -0.3)

    def test_invalid_configurations(self):
        """Test that precondition violations exit with the configuration code."""
        bad = (
            ["construct", "--n", "4", "--x0", "1.5"],
            ["construct", "--n", "4", "--x0", "0.5", "--casey-d", "0.5"],
            ["construct", "--x0", "0.5"],
            ["construct", "--n", "2", "--x0", "0.5"],
            ["invariants", "--n", "4", "--x0", "0.5", "--quantity", "nonsense"],
            ["invariants", "--n", "4", "--x0", "0.5", "--quantity", "esp:9"],
        )
        for argv in bad:
            self.assertEqual(main(argv + ["--out", self.out]), EXIT_CONFIG, argv)


class TestInvariantsCommand(CliTestCase):
    """Test cases for the invariants command."""

    def test_json_report(self):
        doc = self.run_json("invariants", "--n", "4", "--casey-d", "0.5", "--samples", "16",
                            "--quantity", "inv_sides2", "--quantity", "cotpow:2")

        self.assertEqual([r["quantity"] for r in doc["reports"]], ["inv_sides2", "cotpow:2"])
        self.assertAlmostEqual(doc["reports"][0]["closed_form"], 50.0 / 9.0, places=9)
        self.assertAlmostEqual(doc["reports"][1]["closed_form"], 32.0 / 9.0, places=9)
        for report in doc["reports"]:
            self.assertEqual(report["verdict"], "Invariant")
            self.assertTrue(report["closed_form_ok"])
        self.assertIn("tolerances", doc)

    def test_csv_report(self):
        out = os.path.join(self.test_dir, "sweep.csv")
        code = main(["invariants", "--n", "4", "--casey-d", "0.5", "--samples", "16",
                     "--quantity", "inv_sides2", "--format", "csv", "--out", out])
        self.assertEqual(code, EXIT_OK)

        with open(out, "rb") as f:
            raw = f.read().decode("utf-8")
        lines = raw.split("\r\n")
        self.assertEqual(lines[0], ",".join(reports.SWEEP_COLUMNS))
        self.assertEqual(lines[-1], "")
        rows = [line.split(",") for line in lines[1:-1]]
        self.assertGreaterEqual(len(rows), 16)
        for row in rows:
            self.assertEqual(row[0], "1")
            self.assertEqual(row[1], "inv_sides2")
            self.assertAlmostEqual(float(row[3]), 50.0 / 9.0, places=8)


class TestConjecturesCommand(CliTestCase):
    """Test cases for the conjectures command."""

    def test_area_sum_needs_odd_n(self):
        code = main(["conjectures", "area-sum", "--n", "4", "--ah", "2", "--bh", "1", "--out", self.out])
        self.assertEqual(code, EXIT_CONFIG)

    def test_area_sum_heptagon(self):
        doc = self.run_json("conjectures", "area-sum", "--n", "7", "--ah", "2", "--bh", "1", "--samples", "24")
        self.assertEqual(doc["verdict"], "Supported")
        self.assertEqual(doc["command"], "conjectures area-sum")

    def test_isocurves(self):
        doc = self.run_json("conjectures", "isocurves", "--n", "4", "--x0", "0.5",
                            "--n-circles", "6", "--n-points", "8", "--t", "0.3")
        self.assertEqual(doc["isocurves"]["verdict"], "Supported")
        self.assertTrue(doc["isocurves"]["monotone"])
        self.assertLess(doc["isocurves"]["phase_spread"], 1e-9)

    def test_isocurves_needs_samples(self):
        """Test that empty pencils and empty rings are configuration errors."""
        for flag in ("--n-circles", "--n-points"):
            for value in ("0", "-3"):
                argv = ["conjectures", "isocurves", "--n", "4", "--x0", "0.5", flag, value, "--out", self.out]
                self.assertEqual(main(argv), EXIT_CONFIG, argv)

    def test_sin2theta(self):
        doc = self.run_json("conjectures", "sin2theta", "--n", "5", "--casey-d", "0.3", "--samples", "16")

        self.assertEqual(doc["command"], "conjectures sin2theta")
        self.assertEqual(doc["verdict"], "Supported")
        self.assertEqual([r["verdict"] for r in doc["reports"]], ["Invariant", "Invariant"])

    def test_sin2theta_square_family_is_zero(self):
        doc = self.run_json("conjectures", "sin2theta", "--n", "4", "--casey-d", "0.5", "--samples", "16")

        self.assertEqual(doc["verdict"], "Supported")
        self.assertEqual([r["verdict"] for r in doc["reports"]], ["Zero", "Zero"])


class TestTransformCommand(CliTestCase):
    """Test cases for the transform command."""

    def test_loop(self):
        doc = self.run_json("transform", "loop", "--n", "5", "--omega", "0.4")

        self.assertEqual(doc["loop"]["focus_match"], "reciprocal")
        self.assertLess(doc["loop"]["max_deviation"], 1e-8)

    def test_loop_at_regular_endpoint(self):
        """Test that the largest admissible Brocard angle exits cleanly for every N."""
        for n in range(3, 9):
            doc = self.run_json("transform", "loop", "--n", str(n), "--omega", repr(math.pi / 2 - math.pi / n))
            self.assertEqual(doc["loop"]["focus_match"], "regular")
            self.assertEqual(doc["loop"]["x0_inversive"], 0.0)
        doc = self.run_json("transform", "loop", "--n", "7", "--x0", "0")
        self.assertEqual(doc["loop"]["focus_match"], "regular")

    def test_loop_from_family(self):
        doc = self.run_json("transform", "loop", "--n", "5", "--x0", "0.35")
        self.assertAlmostEqual(doc["loop"]["x0_inversive"], 0.35, places=10)

    def test_omega_out_of_range(self):
        code = main(["transform", "loop", "--n", "4", "--omega", "0.9", "--out", self.out])
        self.assertEqual(code, EXIT_CONFIG)

    def test_to_homothetic(self):
        doc = self.run_json("transform", "to-homothetic", "--n", "4", "--x0", "0.5")

        self.assertAlmostEqual(doc["inner"]["a"], 25.0 / 12.0, places=10)
        self.assertAlmostEqual(doc["inner"]["b"], 1.25, places=10)
        self.assertLess(doc["checks"]["vertex_on_outer"], 1e-9)
        self.assertLess(doc["checks"]["side_tangent_inner"], 1e-9)

    def test_to_harmonic(self):
        doc = self.run_json("transform", "to-harmonic", "--n", "5", "--ah", "2", "--bh", "1")

        self.assertAlmostEqual(doc["circumcircle"]["radius"], 2.0, places=10)
        self.assertLess(doc["checks"]["offset_corollary"], 1e-12)

    def test_pair_needs_both_semiaxes(self):
        code = main(["transform", "to-harmonic", "--n", "5", "--ah", "2", "--out", self.out])
        self.assertEqual(code, EXIT_CONFIG)


class TestPlotCommand(CliTestCase):
    """Test cases for the plot command and the figure builders."""

    def test_pencil_svg(self):
        out = os.path.join(self.test_dir, "pencil.svg")
        code = main(["plot", "--kind", "pencil", "--n", "4", "--x0", "0.5", "--n-circles", "4", "--out", out])
        self.assertEqual(code, EXIT_OK)

        with open(out, "r", encoding="utf-8") as f:
            text = f.read()
        self.assertTrue(text.startswith("<?xml"))
        self.assertTrue(text.endswith("</svg>\n"))

    def test_resolution_floor(self):
        out = os.path.join(self.test_dir, "field.svg")
        code = main(["plot", "--kind", "field", "--n", "4", "--x0", "0.5", "--resolution", "8", "--out", out])
        self.assertEqual(code, EXIT_CONFIG)
        self.assertFalse(os.path.exists(out))

    def test_render_is_deterministic(self):
        spec = FamilySpec.inversive(5, 0.4)
        for kind in ("figure1", "polar"):
            self.assertEqual(figures.render_plot(kind, spec, 0.2).render(),
                             figures.render_plot(kind, spec, 0.2).render())

    def test_regular_family_pencil(self):
        """Test that the pencil figure of the regular family draws only the circumcircle."""
        text = figures.render_plot("pencil", FamilySpec.inversive(4, 0.0), 0.0).render()
        self.assertEqual(text.count("<circle"), 1)

    def test_unknown_kind(self):
        with self.assertRaises(ValueError):
            figures.render_plot("sketch", FamilySpec.inversive(4, 0.5), 0.0)


class TestLabConfig(CliTestCase):
    """Test cases for the configuration file layer."""

    def setUp(self):
        """Set up test environment."""
        super().setUp()
        self.config_file = os.path.join(self.test_dir, "lab.json")
        with open(self.config_file, "w") as f:
            json.dump({"n": 4, "x0": 0.5, "samples": 16, "bogus": True}, f)

    def test_load_config(self):
        lab = LabConfig(self.config_file)

        self.assertTrue(lab.loaded)
        self.assertEqual(lab.get("n"), 4)
        self.assertEqual(lab.get("samples"), 16)
        self.assertIsNone(lab.get("bogus"))
        self.assertEqual(lab.get("resolution"), DEFAULTS["resolution"])

    def test_save_config(self):
        lab = LabConfig(self.config_file)
        saved = os.path.join(self.test_dir, "saved.json")

        self.assertTrue(lab.save_config(saved))
        self.assertEqual(LabConfig(saved).config, lab.config)

    def test_flags_override_file(self):
        doc = self.run_json("construct", "--config", self.config_file, "--n", "6")

        self.assertEqual(doc["family"]["n"], 6)
        self.assertEqual(doc["family"]["param"], 0.5)

    def test_missing_config_file(self):
        missing = os.path.join(self.test_dir, "missing.json")
        code = main(["construct", "--config", missing, "--out", self.out])
        self.assertEqual(code, EXIT_CONFIG)

    def test_default_config_file(self):
        """Test that the shipped defaults file matches the built-in defaults."""
        path = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data", "default_config.json")
        self.assertEqual(LabConfig(path).config, DEFAULTS)


def run_tests():
    """Run all tests."""
    loader = unittest.TestLoader()
    test_suite = unittest.TestSuite()
    for case in (TestConstruct, TestInvariantsCommand, TestConjecturesCommand,
                 TestTransformCommand, TestPlotCommand, TestLabConfig):
        test_suite.addTests(loader.loadTestsFromTestCase(case))

    test_runner = unittest.TextTestRunner(verbosity=2)
    test_result = test_runner.run(test_suite)

    return test_result.wasSuccessful()


if __name__ == "__main__":
    success = run_tests()
    sys.exit(0 if success else 1)
