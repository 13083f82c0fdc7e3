##
# Unit tests for the build command.
#
# Copyright (c) confsetlib contributors
#
# SPDX-License-Identifier: BSD-2-Clause-Patent
##
import json
import unittest

import pytest
from confsetlib.errors import CapExceededError, ImpossibleObservationError, ModelValidationError, UsageError
from confsetlib.harness.build import build_command
from confsetlib.harness.config import ExperimentConfig
from confsetlib.models import validate_model

GOLDEN = {
    "alphabet": ["0", "1"],
    "signal": {"kind": "iid", "marginal": [0.9, 0.1]},
    "channel": {"kind": "erasure_unknown"},
}


class BuildCommandTest(unittest.TestCase):
    def setUp(self):
        self.model = validate_model(GOLDEN)

    def test_golden(self):
        cs, text = build_command(ExperimentConfig(gammas=(0.99,), z="0*1*"), self.model)
        self.assertEqual([line.split("\t")[0] for line in text.splitlines()], ["0010", "0011", "0110"])
        self.assertNotIn("p=", text)
        self.assertIsNone(cs.boundary)

    def test_boundary_line(self):
        _, text = build_command(ExperimentConfig(gammas=(0.5,), z="0*1*"), self.model)
        lines = text.splitlines()
        self.assertEqual(len(lines), 1)
        x, posterior, inclusion = lines[0].split("\t")
        self.assertEqual(x, "0010")
        self.assertAlmostEqual(float(posterior), 0.81, delta=1e-12)
        self.assertAlmostEqual(float(inclusion[2:]), 0.5 / 0.81, delta=1e-12)

    def test_usage_errors(self):
        with self.assertRaises(UsageError):
            build_command(ExperimentConfig(gammas=(0.5, 0.9), z="0*1*"), self.model)
        with self.assertRaises(UsageError):
            build_command(ExperimentConfig(gammas=(0.5,)), self.model)
        with self.assertRaises(UsageError):
            build_command(ExperimentConfig(gammas=(0.5,), z="0*1*"))

    def test_bad_glyph(self):
        with self.assertRaises(ModelValidationError):
            build_command(ExperimentConfig(z="0x1*"), self.model)

    def test_cap(self):
        with self.assertRaises(CapExceededError):
            build_command(ExperimentConfig(gammas=(0.99,), z="0*1*", cap=1), self.model)


def test_impossible_observation(tmp_path):
    path = tmp_path / "never_one.json"
    path.write_text(
        json.dumps(
            {
                "alphabet": ["0", "1"],
                "signal": {"kind": "iid", "marginal": [1.0, 0.0]},
                "channel": {"kind": "dmc", "matrix": [[1, 0], [0, 1]]},
            }
        )
    )
    with pytest.raises(ImpossibleObservationError):
        build_command(ExperimentConfig(model_path=str(path), z="01"))
