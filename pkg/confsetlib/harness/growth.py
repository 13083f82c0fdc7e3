##
# Growth experiment: per-symbol log size of confidence sets against h(X|Z).
#
# Copyright (c) confsetlib contributors
#
# SPDX-License-Identifier: BSD-2-Clause-Patent
##
"""Growth experiment.

For every t of the grid, `samples` observations are drawn (sample s of length t
uses derive_seed(seed, t, s)) and the expected confidence set size is computed
exactly for each gamma. Memoryless models go through posterior levels, which
reach set sizes far beyond anything listable; other models enumerate the set
explicitly up to the cap. The mean of (1/t) log2 E|set| at the largest t is
compared with the conditional entropy rate.
"""

import logging
import math
from typing import Callable, Iterable, Optional

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from confsetlib.confset import COVERAGE_TOLERANCE, build_confidence_set, expected_log_size, summarize_levels
from confsetlib.entropy import EntropyEstimate, closed_form_rate, smb_estimate
from confsetlib.errors import CapExceededError, ClosedFormUnavailableError, UsageError
from confsetlib.harness.config import ExperimentConfig
from confsetlib.harness.report import ExperimentReport, gamma_label
from confsetlib.inference import enumerate_descending, enumerate_levels
from confsetlib.models import ChannelKind, ModelSpec, compile_trellis, sample_path
from confsetlib.rng import PATH_STREAM, derive_seed, generator
from confsetlib.utility_functions import CompensatedSum, timing

COLUMNS = ["t", "sample", "log2_expected_size", "rate"]

logger = logging.getLogger(__name__)


def _take_until(
    items: Iterable, mass_of: Callable[[object], float], gamma: float, limit: Optional[int] = None
) -> list:
    """Collects items until their mass passes gamma, the iterator ends, or limit items were taken."""
    taken = []
    mass = CompensatedSum()
    for item in items:
        taken.append(item)
        mass.add(mass_of(item))
        if mass.value > gamma + COVERAGE_TOLERANCE or (limit is not None and len(taken) >= limit):
            break
    return taken


def expected_log_sizes(model: ModelSpec, z: tuple[int, ...], gammas: tuple[float, ...], cap: int) -> list:
    """Returns log2 of the expected set size of z for each gamma; None where the cap was exceeded."""
    top = max(gammas)
    if model.is_memoryless:
        levels = _take_until(enumerate_levels(model, z), lambda level: level.mass, top)
        return [expected_log_size(summarize_levels(levels, gamma)) for gamma in gammas]

    stream = enumerate_descending(compile_trellis(model, z))
    items = _take_until(stream, lambda item: item.posterior, top, limit=cap + 1)
    sizes = []
    for gamma in gammas:
        try:
            sizes.append(expected_log_size(build_confidence_set(items, gamma, cap)))
        except CapExceededError as exc:
            logger.warning("t = %d, gamma = %s: %s", len(z), gamma, exc)
            sizes.append(None)
    return sizes


def _run_t(model: ModelSpec, config: ExperimentConfig, t: int) -> list[dict]:
    rows = []
    for sample in range(config.samples):
        seed = derive_seed(config.seed, t, sample)
        _, z = sample_path(model, t, generator(seed, PATH_STREAM), config.surrogate_pi)
        for gamma, log_size in zip(config.gammas, expected_log_sizes(model, z, config.gammas, config.cap)):
            rows.append(
                {
                    "gamma": gamma,
                    "t": t,
                    "sample": sample,
                    "log2_expected_size": log_size,
                    "rate": None if log_size is None else log_size / t,
                }
            )
    return rows


def reference_rate(model: ModelSpec, config: ExperimentConfig) -> EntropyEstimate:
    """h(X|Z) for the reference line: the closed form when there is one, otherwise the smb estimate."""
    known = model
    if model.channel.kind is ChannelKind.ERASURE_UNKNOWN:
        known = model.with_surrogate(config.surrogate_pi)
    try:
        return closed_form_rate(known)
    except ClosedFormUnavailableError:
        logger.info("No closed form; estimating h(X|Z) with %d replicates of length %d", config.reps, config.smb_n)
        return smb_estimate(known, config.smb_n, config.reps, config.seed, joint=config.joint, n_jobs=config.workers)


@timing
def growth_experiment(config: ExperimentConfig, model: Optional[ModelSpec] = None) -> ExperimentReport:
    """Runs the growth experiment.

    Checks: for each gamma the mean rate at the largest t lies within `tolerance` of h(X|Z);
    with several gammas the spread of those means is at most `spread_tolerance`.

    Raises:
        (UsageError): erasure_unknown without surrogate-pi
    """
    if model is None:
        model = config.load_model()
    if model.channel.kind is ChannelKind.ERASURE_UNKNOWN and config.surrogate_pi is None:
        raise UsageError("Simulating an erasure_unknown channel needs --surrogate-pi")
    logger.info("Growth: t grid %s, %d samples, gamma %s", list(config.t_grid), config.samples, list(config.gammas))

    per_t = Parallel(n_jobs=config.workers)(delayed(_run_t)(model, config, t) for t in config.t_grid)
    frame = pd.DataFrame([row for rows in per_t for row in rows], columns=["gamma"] + COLUMNS)
    frame["log2_expected_size"] = frame["log2_expected_size"].astype("float64")
    frame["rate"] = frame["rate"].astype("float64")
    frame = frame.sort_values(["gamma", "t", "sample"], kind="stable").reset_index(drop=True)
    report = ExperimentReport("growth", COLUMNS, frame)

    reference = reference_rate(model, config)
    report.summary["reference_rate"] = reference.value
    report.summary["reference_method"] = reference.method.value
    final_t = config.t_grid[-1]
    report.summary["final_t"] = final_t

    finals = []
    for gamma in config.gammas:
        label = gamma_label(gamma)
        rows = frame[frame["gamma"] == gamma]
        capped = int(rows["rate"].isna().sum())
        report.summary[f"cap_exceeded_g{label}"] = capped
        for t, group in rows.groupby("t", sort=True):
            report.summary[f"mean_rate_g{label}_t{t}"] = float(group["rate"].mean())
        final = rows[rows["t"] == final_t]["rate"].dropna()
        if final.empty:
            report.add_check(f"rate_g{label}", False, math.nan, reference.value, config.tolerance,
                             f"every sample at t = {final_t} exceeded the cap")
            continue
        mean = float(np.mean(final))
        finals.append(mean)
        report.add_check(
            f"rate_g{label}",
            abs(mean - reference.value) <= config.tolerance,
            mean,
            reference.value,
            config.tolerance,
            f"mean rate {mean:.5f} at t = {final_t} over {len(final)} samples, h(X|Z) = {reference.value:.6f}",
        )

    if len(finals) > 1:
        spread = max(finals) - min(finals)
        report.summary["rate_spread"] = spread
        report.add_check(
            "rate_spread",
            spread <= config.spread_tolerance,
            spread,
            0.0,
            config.spread_tolerance,
            f"final mean rates {[round(v, 5) for v in finals]} spread {spread:.5f} at t = {final_t}",
        )
    return report
