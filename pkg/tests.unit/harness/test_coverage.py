##
# Unit tests for the coverage experiment.
#
# Copyright (c) confsetlib contributors
#
# SPDX-License-Identifier: BSD-2-Clause-Patent
##
import math

import pandas as pd
import pytest
from confsetlib.errors import CapRateExceededError, UsageError
from confsetlib.harness.config import ExperimentConfig
from confsetlib.harness.coverage import COLUMNS, coverage_experiment
from confsetlib.models import validate_model

ERASURE_03 = {
    "alphabet": ["0", "1"],
    "signal": {"kind": "iid", "marginal": [0.9, 0.1]},
    "channel": {"kind": "erasure_known", "erasure": {"kind": "iid", "pi": 0.3}},
}
GOLDEN = dict(ERASURE_03, channel={"kind": "erasure_unknown"})


def test_coverage_is_near_gamma():
    config = ExperimentConfig(gammas=(0.5, 0.9), t_grid=(8,), trials=600, seed=42)
    report = coverage_experiment(config, validate_model(ERASURE_03))

    assert report.kind == "coverage"
    assert report.columns == COLUMNS
    assert len(report.rows) == 1200
    assert {check.name for check in report.checks} == {
        "cap_rate_g0.5",
        "coverage_wilson_g0.5",
        "coverage_3sigma_g0.5",
        "cap_rate_g0.9",
        "coverage_wilson_g0.9",
        "coverage_3sigma_g0.9",
    }
    for gamma in (0.5, 0.9):
        coverage = report.summary[f"coverage_g{gamma}"]
        assert abs(coverage - gamma) <= 5 * math.sqrt(gamma * (1 - gamma) / 600)
        assert report.summary[f"cap_exceeded_g{gamma}"] == 0
    # the 0.9 set is never smaller than the 0.5 set of the same observation
    small = report.rows[report.rows["gamma"] == 0.5]["expected_size"].to_numpy()
    large = report.rows[report.rows["gamma"] == 0.9]["expected_size"].to_numpy()
    assert (large >= small).all()


def test_rows_do_not_depend_on_workers():
    model = validate_model(ERASURE_03)
    serial = coverage_experiment(ExperimentConfig(t_grid=(6,), trials=300, seed=9), model)
    parallel = coverage_experiment(ExperimentConfig(t_grid=(6,), trials=300, seed=9, workers=2), model)
    pd.testing.assert_frame_equal(serial.rows, parallel.rows)
    assert serial.rows["trial"].tolist() == list(range(300))


def test_cap_rate_failure():
    # with two or more erasures the core needs a second member, which the cap forbids
    config = ExperimentConfig(gammas=(0.99,), t_grid=(8,), trials=200, cap=1, seed=1)
    report = coverage_experiment(config, validate_model(ERASURE_03))
    assert report.rows["covered"].isna().sum() > 100
    assert report.rows["core_size"].isna().sum() == report.rows["covered"].isna().sum()
    error = report.failure()
    assert isinstance(error, CapRateExceededError)
    assert error.exit_code == 4


def test_surrogate_for_unknown_erasures():
    model = validate_model(GOLDEN)
    with pytest.raises(UsageError, match="surrogate-pi"):
        coverage_experiment(ExperimentConfig(t_grid=(4,), trials=10), model)
    report = coverage_experiment(ExperimentConfig(t_grid=(4,), trials=50, surrogate_pi=0.3), model)
    assert len(report.rows) == 50


def test_single_t_only():
    with pytest.raises(UsageError, match="exactly one t"):
        coverage_experiment(ExperimentConfig(t_grid=(4, 8), trials=10), validate_model(ERASURE_03))
