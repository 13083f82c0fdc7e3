##
# Unit tests for the entropy run.
#
# Copyright (c) confsetlib contributors
#
# SPDX-License-Identifier: BSD-2-Clause-Patent
##
import logging

import pytest
from confsetlib.errors import UsageError
from confsetlib.harness.config import ExperimentConfig
from confsetlib.harness.entropy_run import COLUMNS, entropy_run
from confsetlib.models import validate_model

ERASURE_03 = {
    "alphabet": ["0", "1"],
    "signal": {"kind": "iid", "marginal": [0.9, 0.1]},
    "channel": {"kind": "erasure_known", "erasure": {"kind": "iid", "pi": 0.3}},
}
MARKOV_BSC = {
    "alphabet": ["0", "1"],
    "signal": {"kind": "markov", "transition": [[0.9, 0.1], [0.2, 0.8]]},
    "channel": {"kind": "dmc", "matrix": [[0.9, 0.1], [0.1, 0.9]]},
}


def test_memoryless_methods_agree():
    config = ExperimentConfig(t_grid=(1, 2, 4), smb_n=400, reps=10, seed=5)
    report = entropy_run(config, validate_model(ERASURE_03))

    assert report.columns == COLUMNS
    assert report.rows["method"].tolist() == ["closed_form", "exact_block", "exact_block", "exact_block",
                                              "smb_monte_carlo"]
    assert report.rows["n"].tolist()[1:4] == [1, 2, 4]
    assert report.rows["reps"].iloc[-1] == 10
    checks = {check.name: check for check in report.checks}
    assert set(checks) == {"exact_block_vs_closed_form", "smb_vs_closed_form", "exact_block_non_increasing"}
    assert checks["exact_block_vs_closed_form"].passed
    assert checks["exact_block_non_increasing"].passed
    assert report.summary["exact_block_n4"] == pytest.approx(report.summary["closed_form"], abs=1e-9)


def test_markov_without_closed_form():
    config = ExperimentConfig(t_grid=(1, 3), smb_n=300, reps=4, seed=2)
    report = entropy_run(config, validate_model(MARKOV_BSC))
    assert "closed_form" not in report.rows["method"].tolist()
    assert {check.name for check in report.checks} == {"smb_below_exact_block", "exact_block_non_increasing"}
    assert "closed_form" not in report.summary


def test_markov_smb_below_unconverged_blocks():
    """The smb estimate may sit below every exact block value while the blocks still converge."""
    report = entropy_run(ExperimentConfig(t_grid=(1, 2, 4, 8), seed=0), validate_model(MARKOV_BSC))
    checks = {check.name: check for check in report.checks}
    assert checks["smb_below_exact_block"].passed, checks["smb_below_exact_block"].message
    assert checks["exact_block_non_increasing"].passed
    assert report.passed
    assert report.failure() is None
    assert checks["smb_below_exact_block"].expected == pytest.approx(report.summary["exact_block_n8"])
    assert report.summary["smb_value"] < report.summary["exact_block_n8"]


def test_block_guard_is_skipped(caplog):
    config = ExperimentConfig(t_grid=(2, 12), smb_n=100, reps=2)
    with caplog.at_level(logging.WARNING, logger="confsetlib.harness.entropy_run"):
        report = entropy_run(config, validate_model(ERASURE_03))
    assert report.rows["n"].dropna().tolist() == [2, 100]
    assert any("Skipping exact block n = 12" in record.getMessage() for record in caplog.records)


def test_unknown_erasure_needs_surrogate():
    model = validate_model(dict(ERASURE_03, channel={"kind": "erasure_unknown"}))
    with pytest.raises(UsageError, match="surrogate-pi"):
        entropy_run(ExperimentConfig(), model)
    report = entropy_run(ExperimentConfig(t_grid=(2,), smb_n=100, reps=2, surrogate_pi=0.3), model)
    assert report.summary["closed_form"] > 0.0
