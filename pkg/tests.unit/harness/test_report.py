##
# Unit tests for experiment reports.
#
# Copyright (c) confsetlib contributors
#
# SPDX-License-Identifier: BSD-2-Clause-Patent
##
import json
import logging
import unittest
from pathlib import Path

import pandas as pd
import pytest
from confsetlib.errors import AcceptanceError, CapRateExceededError
from confsetlib.harness.report import ExperimentReport, gamma_label, wilson_interval


class WilsonIntervalTest(unittest.TestCase):
    def test_contains_estimate(self):
        low, high = wilson_interval(900, 1000)
        self.assertLess(low, 0.9)
        self.assertGreater(high, 0.9)
        # z = 2.5758 at 99 %
        self.assertAlmostEqual(low, 0.8726, delta=1e-3)
        self.assertAlmostEqual(high, 0.9223, delta=1e-3)

    def test_edges_are_clipped(self):
        low, high = wilson_interval(0, 10)
        self.assertEqual(low, 0.0)
        self.assertGreater(high, 0.0)
        low, high = wilson_interval(10, 10)
        self.assertEqual(high, 1.0)
        self.assertLess(low, 1.0)

    def test_wider_at_higher_level(self):
        narrow = wilson_interval(50, 100, level=0.9)
        wide = wilson_interval(50, 100, level=0.99)
        self.assertLess(wide[0], narrow[0])
        self.assertGreater(wide[1], narrow[1])

    def test_needs_trials(self):
        with self.assertRaises(ValueError):
            wilson_interval(0, 0)


def test_gamma_label():
    assert gamma_label(0.9) == "0.9"
    assert gamma_label(0.95) == "0.95"
    assert gamma_label(0.5) == "0.5"


def _report():
    rows = pd.DataFrame(
        {
            "trial": [0, 1, 0, 1],
            "value": [0.1, 1 / 3, 2.0, 0.25],
            "gamma": [0.5, 0.5, 0.95, 0.95],
        }
    )
    return ExperimentReport("coverage", ["trial", "value"], rows)


class ExperimentReportTest(unittest.TestCase):
    def test_csv_outputs_per_gamma(self):
        outputs = _report().csv_outputs("runs/cov.csv")
        self.assertEqual(set(outputs), {Path("runs/cov_g0.5.csv"), Path("runs/cov_g0.95.csv")})
        text = outputs[Path("runs/cov_g0.5.csv")]
        self.assertEqual(text, "trial,value\n0,0.10000000000000001\n1,0.33333333333333331\n")

    def test_single_gamma_is_not_split(self):
        report = _report()
        report.rows = report.rows[report.rows["gamma"] == 0.5]
        self.assertEqual(list(report.csv_outputs("cov.csv")), [Path("cov.csv")])

    def test_gamma_column_in_schema_is_not_split(self):
        report = _report()
        report.columns = ["trial", "gamma", "value"]
        outputs = report.csv_outputs("oracle.csv")
        self.assertEqual(list(outputs), [Path("oracle.csv")])
        self.assertTrue(outputs[Path("oracle.csv")].startswith("trial,gamma,value\n"))

    def test_empty_report(self):
        report = ExperimentReport("growth", ["t", "size"])
        self.assertEqual(report.csv_outputs("g.csv"), {Path("g.csv"): "t,size\n"})
        self.assertTrue(report.passed)
        self.assertIsNone(report.failure())

    def test_checks_and_failure(self):
        report = _report()
        with self.assertLogs("confsetlib.harness.report", level=logging.INFO):
            report.add_check("coverage_g0.5", True, 0.5, 0.5, 0.01, "ok")
        self.assertIsNone(report.failure())
        report.add_check("coverage_g0.95", False, 0.9, 0.95, 0.01, "low")
        self.assertFalse(report.passed)
        error = report.failure()
        self.assertIsInstance(error, AcceptanceError)
        self.assertEqual(error.exit_code, 5)
        self.assertIn("coverage_g0.95", str(error))

        report.add_check("cap_rate", False, 0.2, 0.01, 0.0, "cap hit", exit_code=CapRateExceededError.exit_code)
        error = report.failure()
        self.assertIsInstance(error, CapRateExceededError)
        self.assertEqual(error.exit_code, 4)

    def test_summary_values(self):
        report = _report()
        report.summary = {"trials": 2, "rate": 0.1, "name": "x"}
        self.assertEqual(report.summary_values(), {"trials": "2", "rate": "0.1", "name": "x"})


def test_write(tmp_path):
    report = _report()
    report.attachments["repro"] = {"cases": [{"seed": 3}]}
    written = report.write(str(tmp_path / "cov.csv"))
    names = sorted(path.name for path in written)
    assert names == ["cov_g0.5.csv", "cov_g0.95.csv", "cov_repro.json"]
    assert (tmp_path / "cov_g0.95.csv").read_bytes() == b"trial,value\n0,2\n1,0.25\n"
    assert json.loads((tmp_path / "cov_repro.json").read_text()) == {"cases": [{"seed": 3}]}


def test_write_is_byte_identical(tmp_path):
    first = _report().write(str(tmp_path / "a.csv"))
    second = _report().write(str(tmp_path / "b.csv"))
    for a, b in zip(sorted(first), sorted(second)):
        assert a.read_bytes() == b.read_bytes()


def test_nullable_columns_write_empty_fields():
    rows = pd.DataFrame({"trial": [0, 1], "core_size": pd.array([3, None], dtype="Int64")})
    report = ExperimentReport("coverage", ["trial", "core_size"], rows)
    assert report.csv_outputs("c.csv")[Path("c.csv")] == "trial,core_size\n0,3\n1,\n"


@pytest.mark.parametrize("successes,n", [(5, 10), (99, 100), (1, 1000)])
def test_wilson_bounds_are_ordered(successes, n):
    low, high = wilson_interval(successes, n)
    assert 0.0 <= low <= successes / n <= high <= 1.0
