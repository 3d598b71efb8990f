"""The test suite for harness.py"""
import sys
sys.path.insert(1, ".")
from anisopy import *

import dataclasses
import unittest

import numpy as np


def square_mesh(m: int, q: int = 1, dim: int = 2) -> TensorMesh:
    return build_tensor_mesh([build_uniform_grid(m)] * dim, q)


def make_config(kind: str, diffusion: str = "identity", source: str = "sine-product", **kwargs) -> ExperimentConfig:
    """Returns a 2D config with q = 1 and builtin problems"""
    dim = kwargs.pop("dim", 2)
    q = kwargs.pop("q", 1)
    return ExperimentConfig(
        kind, build_diffusion(diffusion, dim, q), build_source(source, dim, q), **kwargs
    )


def check_invalid(test: unittest.TestCase, config: ExperimentConfig):
    """Asserts that a harness refuses the config

    Parameters
    ----------
    test : unittest.TestCase
        the test case to run the test on
    config : ExperimentConfig
        the invalid config
    """
    with test.assertRaises(ConfigError):
        Harness(config)


def check_nonincreasing(test: unittest.TestCase, report: RateReport, name: str):
    """Asserts that the measured quantity does not grow along the cases,
    ignoring cases at the solver floor

    Parameters
    ----------
    test : unittest.TestCase
        the test case to run the test on
    report : RateReport
        the report whose cases are ordered by decreasing parameter
    name : str
        the measured quantity
    """
    values = [case.errors[name] for case in report.cases if not case.at_floor]
    test.assertGreater(len(values), 1)
    for before, after in zip(values, values[1:]):
        test.assertLessEqual(after, before)


class TestConfig(unittest.TestCase):
    """Test suite for ExperimentConfig validation"""

    def test_unknown_kind(self):
        check_invalid(self, make_config("sweep-everything", mesh=square_mesh(4)))

    def test_missing_mesh(self):
        check_invalid(self, make_config("solve"))
        check_invalid(self, make_config("check-h2"))

    def test_mesh_mismatch(self):
        check_invalid(self, make_config("solve", mesh=square_mesh(4, 2, 3)))

    def test_eps_out_of_range(self):
        check_invalid(self, make_config("solve", mesh=square_mesh(4), eps=[0.0]))
        check_invalid(self, make_config("solve", mesh=square_mesh(4), eps=[1.5]))

    def test_sweep_eps_needs_two_values(self):
        check_invalid(self, make_config("sweep-eps", mesh=square_mesh(4), eps=[0.5, 0.5]))

    def test_cells(self):
        check_invalid(self, make_config("sweep-h-limit", cells=[8]))
        check_invalid(self, make_config("sweep-h-limit", cells=[8, 4]))
        check_invalid(self, make_config("sweep-h-limit", cells=[1, 4]))

    def test_decomp_delta(self):
        check_invalid(self, make_config("check-decomp", delta=[0.25]))
        check_invalid(self, make_config("check-decomp", delta=[0.25, 1.0]))

    def test_h2_needs_uniform_mesh(self):
        mesh = build_tensor_mesh([Grid1D([0, 0.3, 1]), build_uniform_grid(2)], 1)
        check_invalid(self, make_config("check-h2", mesh=mesh))

    def test_ranges(self):
        mesh = square_mesh(4)
        check_invalid(self, make_config("solve", mesh=mesh, load_mode="exact"))
        check_invalid(self, make_config("solve", mesh=mesh, tol=0.0))
        check_invalid(self, make_config("solve", mesh=mesh, threads=0))
        check_invalid(self, make_config("solve", mesh=mesh, quadrature=4))
        check_invalid(self, make_config("solve", mesh=mesh, c2=0.0))

    def test_floor(self):
        self.assertAlmostEqual(make_config("solve", tol=1e-9).floor, 1e-7)


class TestRateReport(unittest.TestCase):
    """Test suite for RateReport.judge"""

    def make_report(self, slope: float) -> RateReport:
        report = RateReport("sweep-eps", "error_gradX2")
        report.fits["error_gradX2"] = RateFit([], slope, 0.0, 1.0)
        report.thresholds["error_gradX2"] = (0.9, None)
        return report

    def test_pass(self):
        report = self.make_report(1.2)
        report.judge()
        self.assertEqual(report.status, "true")
        self.assertTrue(report.passed)

    def test_fail(self):
        report = self.make_report(0.5)
        report.judge()
        self.assertEqual(report.status, "false")
        self.assertFalse(report.passed)

    def test_upper_bound(self):
        report = self.make_report(1.2)
        report.thresholds["error_gradX2"] = (0.9, 1.1)
        report.judge()
        self.assertEqual(report.status, "false")

    def test_missing_fit(self):
        report = RateReport("sweep-eps", "error_gradX2")
        report.thresholds["error_gradX2"] = (0.9, None)
        report.judge()
        self.assertEqual(report.status, "skipped")
        self.assertTrue(report.passed)
        self.assertEqual(len(report.notes), 1)


class TestSolve(unittest.TestCase):
    """Test suite for single solves"""

    def test_hand_value_eps_1(self):
        harness = Harness(make_config("solve", source="one", mesh=square_mesh(2), eps=[1.0]))
        case = harness.run_case()
        self.assertAlmostEqual(float(case.solution.interior_values()[0]), 3.0 / 32.0, places=12)
        self.assertAlmostEqual(case.errors["norm_gradX2"], 3.0 / 32.0 * np.sqrt(4.0 / 3.0), places=12)
        self.assertNotIn("error_grad_exact", case.errors)

    def test_hand_value_limit(self):
        harness = Harness(make_config("solve", source="one", mesh=square_mesh(2), limit=True))
        report = harness.run()
        self.assertEqual(report.kind, "solve")
        self.assertEqual(report.status, "skipped")
        self.assertAlmostEqual(float(report.cases[0].solution.interior_values()[0]), 3.0 / 16.0, places=12)
        self.assertEqual(report.cases[0].param, 0.0)

    def test_exact_error_column(self):
        harness = Harness(make_config("solve", source="poisson-sine", mesh=square_mesh(16), eps=[1.0], load_mode="quadrature"))
        case = harness.run_case()
        self.assertLess(case.errors["error_grad_exact"], 0.2)

    def test_dump_keeps_matrix(self):
        harness = Harness(make_config("solve", mesh=square_mesh(4), eps=[0.5], dump_fields=True))
        case = harness.run_case()
        self.assertEqual(case.matrix.shape, (9, 9))
        self.assertEqual(case.stats[0].converged, True)

    def test_limit_refuses_x1_dependent_a22(self):
        A = DiffusionSpec("x1-dependent", [[1.0, 0.0], [0.0, lambda x: 1.0 + x[0]]], 1, 1.0)
        config = ExperimentConfig("solve", A, build_source("one", 2, 1), mesh=square_mesh(4), limit=True)
        with self.assertRaises(ExperimentError):
            Harness(config).run()

    def test_refuses_indefinite(self):
        A = DiffusionSpec("indefinite", [[1.0, 2.0], [2.0, 1.0]], 1, 1.0, offdiag_zero_on_boundary=False)
        config = ExperimentConfig("solve", A, build_source("one", 2, 1), mesh=square_mesh(4))
        with self.assertRaises(ExperimentError):
            Harness(config).run()

    def test_refuses_nonsymmetric(self):
        A = DiffusionSpec(
            "skew", [[1.0, 0.0], [lambda x: 0.5 * x[0], 1.0]], 1, 0.5, symmetric=False, offdiag_zero_on_boundary=False
        )
        config = ExperimentConfig("solve", A, build_source("one", 2, 1), mesh=square_mesh(4), eps=[1.0])
        with self.assertRaises(ExperimentError):
            Harness(config).run()


class TestExperiments(unittest.TestCase):
    """Test suite for the sweeps at small sizes"""

    def test_eps_sweep(self):
        config = make_config("sweep-eps", mesh=square_mesh(16), eps=[0.5, 0.25, 0.125, 0.0625])
        report = Harness(config).run()
        self.assertEqual([c.param for c in report.cases], [0.5, 0.25, 0.125, 0.0625])
        self.assertGreaterEqual(report.fits["error_gradX2"].slope, 0.9)
        self.assertEqual(report.thresholds["error_gradX2"], (0.9, None))
        self.assertEqual(report.status, "true")
        self.assertEqual(len(report.cases[0].stats), 2)
        self.assertEqual(len(report.cases[1].stats), 1)
        check_nonincreasing(self, report, "error_gradX2")

    def test_eps_sweep_report_only_for_h2_source(self):
        config = make_config("sweep-eps", source="one", mesh=square_mesh(8), eps=[0.5, 0.25])
        report = Harness(config).run()
        self.assertNotIn("error_gradX2", report.thresholds)
        self.assertEqual(report.status, "skipped")

    def test_configured_bounds_override(self):
        config = make_config("sweep-eps", mesh=square_mesh(8), eps=[0.5, 0.25], min_slope=3.0)
        report = Harness(config).run()
        self.assertEqual(report.status, "false")

    def test_threads_give_same_report(self):
        config = make_config("sweep-eps", mesh=square_mesh(8), eps=[0.5, 0.25, 0.125])
        serial = Harness(config).run()
        parallel = Harness(dataclasses.replace(config, threads=3)).run()
        self.assertEqual(
            [c.errors for c in serial.cases], [c.errors for c in parallel.cases]
        )

    def test_h_sweep_limit(self):
        config = make_config("sweep-h-limit", cells=[8, 16, 32], reference_levels=1, slope_slack=0.1)
        report = Harness(config).run()
        self.assertEqual([c.param_name for c in report.cases], ["h"] * 3)
        self.assertAlmostEqual(report.cases[0].param, 1.0 / 8.0)
        self.assertEqual(report.status, "true")

    def test_h_sweep_uniform_columns(self):
        config = make_config("sweep-h-uniform", cells=[4, 8], eps=[1.0, 0.1], reference_levels=1)
        report = Harness(config).run()
        errors = report.cases[0].errors
        self.assertEqual(list(errors), ["error_gradX2", "error_gradX2_eps=1", "error_gradX2_eps=0.1"])
        self.assertEqual(errors["error_gradX2"], max(errors["error_gradX2_eps=1"], errors["error_gradX2_eps=0.1"]))
        self.assertEqual(len(report.cases[0].stats), 4)

    def test_h_sweep_uniform_requires_offdiag_zero(self):
        A = DiffusionSpec("coupled", [[1.0, 0.1], [0.1, 1.0]], 1, 0.5)
        config = ExperimentConfig("sweep-h-uniform", A, build_source("one", 2, 1), cells=[4, 8])
        with self.assertRaises(ExperimentError):
            Harness(config).run()

    def test_load_sweep(self):
        config = make_config("sweep-load", cells=[8, 16, 32, 64], eps=[1.0, 0.1, 0.01])
        report = Harness(config).run()
        self.assertEqual(len(report.cases[0].stats), 8)
        # the two load modes agree to second order on the smooth sine source
        self.assertGreaterEqual(report.fits["error_gradX2"].slope, 1.8)
        self.assertGreaterEqual(report.fits["error_gradX2_limit"].slope, 1.8)
        self.assertEqual(report.status, "true")

    def test_decomp_trace_free_source(self):
        config = make_config("check-decomp", delta=[0.25, 0.125], quad_cells=64)
        report = Harness(config).run()
        self.assertEqual(set(report.fits), {"f1_H1", "f1_H2", "f2_L2"})
        low, high = report.thresholds["f2_L2"]
        self.assertAlmostEqual(low, 0.35)
        self.assertIsNone(high)
        self.assertEqual(report.status, "true")

    def test_h2_sweep(self):
        config = make_config("check-h2", mesh=square_mesh(16), eps=[1.0, 0.5, 0.2])
        report = Harness(config).run()
        self.assertLessEqual(report.metrics["ratio"], 10.0)
        self.assertEqual(report.status, "true")
        self.assertEqual(list(report.cases[0].errors), ["combined", "d2x1", "d2x1x2", "d2x2"])

    def test_h2_sweep_warns_below_floor(self):
        config = make_config("check-h2", mesh=square_mesh(8), eps=[1.0, 0.01])
        with self.assertWarns(UserWarning):
            report = Harness(config).run()
        self.assertEqual(report.metrics["ratio"], 1.0)

    def test_validation(self):
        report = Harness(make_config("validate", diffusion="variable-offdiag", mesh=square_mesh(8))).run()
        self.assertEqual(report.status, "true")
        self.assertEqual(report.cases[0].errors["ellipticity"], 1.0)

    def test_validation_lists_declared_flags(self):
        A = DiffusionSpec("coupled", [[1.0, 0.1], [0.1, 1.0]], 1, 0.5, offdiag_zero_on_boundary=False)
        config = ExperimentConfig("validate", A, build_source("one", 2, 1), mesh=square_mesh(4))
        report = Harness(config).run()
        self.assertIn("declared flags: symmetric, lipschitz, a22_x2_only", report.notes)
        self.assertNotIn("offdiag_zero_on_boundary", report.cases[0].errors)

    def test_validation_failure(self):
        A = DiffusionSpec("indefinite", [[1.0, 2.0], [2.0, 1.0]], 1, 1.0)
        config = ExperimentConfig("validate", A, build_source("one", 2, 1), mesh=square_mesh(2))
        report = Harness(config).run()
        self.assertEqual(report.status, "false")
        self.assertFalse(report.passed)


if __name__ == "__main__":
    unittest.main()
