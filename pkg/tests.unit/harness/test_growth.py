##
# Unit tests for the growth experiment.
#
# Copyright (c) confsetlib contributors
#
# SPDX-License-Identifier: BSD-2-Clause-Patent
##
import math

import pandas as pd
import pytest
from confsetlib.confset import build_confidence_set, expected_log_size
from confsetlib.errors import UsageError
from confsetlib.harness.config import ExperimentConfig
from confsetlib.harness.growth import COLUMNS, expected_log_sizes, growth_experiment
from confsetlib.inference import enumerate_descending
from confsetlib.models import compile_trellis, validate_model

H_09 = -(0.9 * math.log2(0.9) + 0.1 * math.log2(0.1))

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


def test_expected_log_sizes_agree_between_paths():
    model = validate_model(ERASURE_03)
    z = model.output_alphabet.parse("0*1**0*1")
    gammas = (0.3, 0.5, 0.95)
    by_levels = expected_log_sizes(model, z, gammas, cap=2**20)
    for gamma, value in zip(gammas, by_levels):
        explicit = build_confidence_set(enumerate_descending(compile_trellis(model, z)), gamma)
        assert value == pytest.approx(expected_log_size(explicit), abs=1e-9)


def test_expected_log_sizes_cap():
    model = validate_model(MARKOV_BSC)
    z = (0, 1, 0, 1, 1, 0, 1, 0)
    assert expected_log_sizes(model, z, (0.99,), cap=1) == [None]
    (value,) = expected_log_sizes(model, z, (0.99,), cap=2**20)
    assert 0.0 < value <= 8.0


def test_growth_memoryless():
    config = ExperimentConfig(gammas=(0.5, 0.95), t_grid=(20, 40), samples=20, seed=3, tolerance=0.5,
                              spread_tolerance=0.5)
    report = growth_experiment(config, validate_model(ERASURE_03))

    assert report.columns == COLUMNS
    assert len(report.rows) == 2 * 2 * 20
    assert report.summary["reference_method"] == "closed_form"
    assert report.summary["reference_rate"] == pytest.approx(0.3 * H_09, abs=1e-12)
    assert report.summary["final_t"] == 40
    assert {"mean_rate_g0.5_t20", "mean_rate_g0.95_t40", "rate_spread"} <= set(report.summary)
    assert [check.name for check in report.checks] == ["rate_g0.5", "rate_g0.95", "rate_spread"]
    assert report.passed
    rates = report.rows["rate"]
    assert rates.notna().all()
    # an observation without erasures gives a set of expected size gamma < 1
    assert ((rates > -0.1) & (rates <= 1.0)).all()


def test_growth_markov_uses_monte_carlo_reference():
    config = ExperimentConfig(gammas=(0.9,), t_grid=(4, 8), samples=5, seed=1, smb_n=300, reps=3)
    report = growth_experiment(config, validate_model(MARKOV_BSC))
    assert report.summary["reference_method"] == "smb_monte_carlo"
    assert 0.0 < report.summary["reference_rate"] < 1.0
    assert report.rows["t"].tolist() == [4] * 5 + [8] * 5


def test_growth_all_capped():
    config = ExperimentConfig(gammas=(0.99,), t_grid=(8,), samples=4, cap=1, smb_n=100, reps=2)
    report = growth_experiment(config, validate_model(MARKOV_BSC))
    capped = report.summary["cap_exceeded_g0.99"]
    assert capped == report.rows["rate"].isna().sum()
    if capped == 4:
        assert not report.passed
        assert math.isnan(report.checks[0].observed)


def test_growth_is_reproducible():
    model = validate_model(ERASURE_03)
    config = ExperimentConfig(gammas=(0.5,), t_grid=(10, 20), samples=6, seed=77)
    first = growth_experiment(config, model)
    second = growth_experiment(ExperimentConfig(gammas=(0.5,), t_grid=(10, 20), samples=6, seed=77, workers=2), model)
    pd.testing.assert_frame_equal(first.rows, second.rows)


def test_growth_needs_surrogate():
    with pytest.raises(UsageError):
        growth_experiment(ExperimentConfig(), validate_model(dict(ERASURE_03, channel={"kind": "erasure_unknown"})))
