##
# Entropy subcommand: every available estimate of h(X|Z) for one model.
#
# Copyright (c) confsetlib contributors
#
# SPDX-License-Identifier: BSD-2-Clause-Patent
##
"""Entropy run: closed form, exact block values for each n of the t grid and one smb estimate."""

import logging
from typing import Optional

import pandas as pd

from confsetlib.entropy import (
    EntropyEstimate,
    closed_form_rate,
    exact_block_conditional_entropy,
    smb_estimate,
)
from confsetlib.errors import ClosedFormUnavailableError, GuardExceededError, UsageError
from confsetlib.harness.config import ExperimentConfig
from confsetlib.harness.report import ExperimentReport
from confsetlib.models import ChannelKind, ModelSpec

COLUMNS = ["method", "n", "reps", "value", "std_error"]
METHOD_AGREEMENT = 1e-9
SMB_SIGMAS = 3.0

logger = logging.getLogger(__name__)


def _row(estimate: EntropyEstimate) -> dict:
    return {
        "method": estimate.method.value,
        "n": estimate.n,
        "reps": estimate.replicates,
        "value": estimate.value,
        "std_error": estimate.std_error,
    }


def entropy_run(config: ExperimentConfig, model: Optional[ModelSpec] = None) -> ExperimentReport:
    """Computes h(X|Z) every way the model allows and cross-checks the methods.

    Checks: exact block values agree with the closed form within 1e-9 for memoryless models and
    are non-increasing in n; the smb estimate lies within 3 standard errors of the closed form,
    or, without a closed form, at most 3 standard errors above the smallest exact block value.
    """
    if model is None:
        model = config.load_model()
    if model.channel.kind is ChannelKind.ERASURE_UNKNOWN:
        if config.surrogate_pi is None:
            raise UsageError("The entropy of an erasure_unknown channel needs --surrogate-pi")
        model = model.with_surrogate(config.surrogate_pi)

    rows = []
    closed = None
    try:
        closed = closed_form_rate(model)
        rows.append(_row(closed))
    except ClosedFormUnavailableError as exc:
        logger.info("%s", exc)

    blocks = []
    for n in config.t_grid:
        try:
            block = exact_block_conditional_entropy(model, n)
        except GuardExceededError as exc:
            logger.warning("Skipping exact block n = %d: %s", n, exc)
            continue
        blocks.append(block)
        rows.append(_row(block))

    smb = smb_estimate(model, config.smb_n, config.reps, config.seed, joint=config.joint, n_jobs=config.workers)
    rows.append(_row(smb))

    frame = pd.DataFrame(rows, columns=COLUMNS)
    frame["n"] = frame["n"].astype("Int64")
    frame["reps"] = frame["reps"].astype("Int64")
    frame["std_error"] = frame["std_error"].astype("float64")
    report = ExperimentReport("entropy", COLUMNS, frame)
    report.summary["smb_value"] = smb.value
    report.summary["smb_std_error"] = smb.std_error

    if closed is not None:
        report.summary["closed_form"] = closed.value
        if model.is_memoryless and blocks:
            gap = max(abs(block.value - closed.value) for block in blocks)
            report.add_check("exact_block_vs_closed_form", gap <= METHOD_AGREEMENT, gap, 0.0, METHOD_AGREEMENT,
                             f"largest |exact_block - closed_form| = {gap:.3g}")
        bound = SMB_SIGMAS * smb.std_error
        report.add_check(
            "smb_vs_closed_form",
            abs(smb.value - closed.value) <= bound,
            smb.value,
            closed.value,
            bound,
            f"smb {smb.value:.6f} +- {smb.std_error:.2g}, closed form {closed.value:.6f}",
        )
    elif blocks:
        # every exact block value of a stationary pair is an upper bound of h(X|Z)
        ceiling = min(block.value for block in blocks)
        bound = SMB_SIGMAS * smb.std_error
        report.add_check(
            "smb_below_exact_block",
            smb.value <= ceiling + bound,
            smb.value,
            ceiling,
            bound,
            f"smb {smb.value:.6f} +- {smb.std_error:.2g}, smallest exact block {ceiling:.6f}",
        )

    if len(blocks) > 1:
        rises = [b.value - a.value for a, b in zip(blocks, blocks[1:])]
        worst = max(rises)
        report.add_check("exact_block_non_increasing", worst <= METHOD_AGREEMENT, worst, 0.0, METHOD_AGREEMENT,
                         f"largest increase between consecutive block lengths {worst:.3g}")
    for block in blocks:
        report.summary[f"exact_block_n{block.n}"] = block.value
    return report
