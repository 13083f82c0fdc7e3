##
# Coverage experiment: how often the randomized confidence set holds the true signal.
#
# Copyright (c) confsetlib contributors
#
# SPDX-License-Identifier: BSD-2-Clause-Patent
##
"""Coverage experiment.

Trial i draws (x, z) from the path stream and a membership uniform from the
uniform stream of the generator keyed by derive_seed(seed, i), builds the
confidence set of z and records whether x is a member. Trials are processed in
fixed chunks, so the rows do not depend on the worker count.
"""

import logging
import math
from typing import Optional

import pandas as pd
from joblib import Parallel, delayed

from confsetlib.confset import build_confidence_set, randomized_membership
from confsetlib.errors import CapExceededError, CapRateExceededError, UsageError
from confsetlib.harness.config import ExperimentConfig
from confsetlib.harness.report import ExperimentReport, gamma_label, wilson_interval
from confsetlib.inference import enumerate_descending
from confsetlib.models import ChannelKind, ModelSpec, compile_trellis, sample_path
from confsetlib.rng import PATH_STREAM, UNIFORM_STREAM, derive_seed, generator
from confsetlib.utility_functions import timing

COLUMNS = ["trial", "seed", "covered", "core_size", "expected_size"]
CHUNK_SIZE = 256
CAP_RATE_LIMIT = 0.01
WILSON_LEVEL = 0.99

logger = logging.getLogger(__name__)


def _run_chunk(
    model: ModelSpec, config: ExperimentConfig, t: int, start: int, stop: int
) -> list[dict]:
    """Runs trials [start, stop) for every gamma; sets are cached per observation."""
    cache = {}
    rows = []
    for trial in range(start, stop):
        seed = derive_seed(config.seed, trial)
        x, z = sample_path(model, t, generator(seed, PATH_STREAM), config.surrogate_pi)
        u = float(generator(seed, UNIFORM_STREAM).random())
        for gamma in config.gammas:
            key = (z, gamma)
            if key not in cache:
                try:
                    stream = enumerate_descending(compile_trellis(model, z))
                    cache[key] = build_confidence_set(stream, gamma, config.cap)
                except CapExceededError as exc:
                    logger.warning("Trial %d: %s", trial, exc)
                    cache[key] = None
            cs = cache[key]
            row = {"gamma": gamma, "trial": trial, "seed": seed, "covered": None, "core_size": None,
                   "expected_size": None}
            if cs is not None:
                row["covered"] = int(randomized_membership(cs, x, u))
                row["core_size"] = len(cs.core)
                row["expected_size"] = cs.expected_size
            rows.append(row)
    return rows


def _frame(rows: list[dict]) -> pd.DataFrame:
    frame = pd.DataFrame(rows, columns=["gamma"] + COLUMNS)
    frame["covered"] = frame["covered"].astype("Int64")
    frame["core_size"] = frame["core_size"].astype("Int64")
    frame["expected_size"] = frame["expected_size"].astype("float64")
    return frame.sort_values(["gamma", "trial"], kind="stable").reset_index(drop=True)


@timing
def coverage_experiment(config: ExperimentConfig, model: Optional[ModelSpec] = None) -> ExperimentReport:
    """Runs the coverage experiment.

    Checks per gamma: gamma lies in the 99% Wilson interval of the empirical coverage, the
    empirical coverage is within 3 sigma of gamma, and fewer than 1% of trials hit the cap.

    Args:
        config: run settings; exactly one t
        model: the model, loaded from config.model_path when None

    Raises:
        (UsageError): several t values, or erasure_unknown without surrogate-pi
    """
    if model is None:
        model = config.load_model()
    if len(config.t_grid) != 1:
        raise UsageError("coverage takes exactly one t")
    if model.channel.kind is ChannelKind.ERASURE_UNKNOWN and config.surrogate_pi is None:
        raise UsageError("Simulating an erasure_unknown channel needs --surrogate-pi")
    t = config.t_grid[0]
    logger.info("Coverage: %d trials, t = %d, gamma %s", config.trials, t, list(config.gammas))

    bounds = [(start, min(start + CHUNK_SIZE, config.trials)) for start in range(0, config.trials, CHUNK_SIZE)]
    chunks = Parallel(n_jobs=config.workers)(
        delayed(_run_chunk)(model, config, t, start, stop) for start, stop in bounds
    )
    rows = [row for chunk in chunks for row in chunk]
    report = ExperimentReport("coverage", COLUMNS, _frame(rows))

    for gamma in config.gammas:
        label = gamma_label(gamma)
        frame = report.rows[report.rows["gamma"] == gamma]
        valid = frame["covered"].dropna()
        capped = len(frame) - len(valid)
        cap_rate = capped / len(frame)
        report.summary[f"cap_exceeded_g{label}"] = capped
        report.add_check(
            f"cap_rate_g{label}",
            cap_rate < CAP_RATE_LIMIT,
            cap_rate,
            0.0,
            CAP_RATE_LIMIT,
            f"{capped} of {len(frame)} trials exceeded the cap of {config.cap}",
            exit_code=CapRateExceededError.exit_code,
        )
        if len(valid) == 0:
            continue

        n = len(valid)
        covered = int(valid.sum())
        empirical = covered / n
        low, high = wilson_interval(covered, n, WILSON_LEVEL)
        sigma3 = 3.0 * math.sqrt(gamma * (1.0 - gamma) / n)
        report.summary[f"coverage_g{label}"] = empirical
        report.summary[f"wilson_low_g{label}"] = low
        report.summary[f"wilson_high_g{label}"] = high
        report.summary[f"mean_expected_size_g{label}"] = float(frame["expected_size"].mean())
        report.add_check(
            f"coverage_wilson_g{label}",
            low <= gamma <= high,
            empirical,
            gamma,
            (high - low) / 2.0,
            f"coverage {empirical:.5f} over {n} trials, 99% Wilson interval [{low:.5f}, {high:.5f}]",
        )
        report.add_check(
            f"coverage_3sigma_g{label}",
            abs(empirical - gamma) <= sigma3,
            empirical,
            gamma,
            sigma3,
            f"|{empirical:.5f} - {gamma}| <= {sigma3:.5f}",
        )
    return report
