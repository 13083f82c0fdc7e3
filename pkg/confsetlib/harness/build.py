##
# Build command: the confidence set of one observation.
#
# Copyright (c) confsetlib contributors
#
# SPDX-License-Identifier: BSD-2-Clause-Patent
##
"""Builds and serializes the confidence set of a single observation."""

import logging
from typing import Optional

from confsetlib.confset import ConfidenceSet, build_confidence_set, format_confidence_set
from confsetlib.errors import UsageError
from confsetlib.harness.config import ExperimentConfig
from confsetlib.inference import enumerate_descending
from confsetlib.models import ModelSpec, compile_trellis
from confsetlib.parsers.model_parser import parse_observation

logger = logging.getLogger(__name__)


def build_command(config: ExperimentConfig, model: Optional[ModelSpec] = None) -> tuple[ConfidenceSet, str]:
    """Builds the confidence set of `config.z` at the single configured gamma.

    Returns:
        (tuple): the set and its text form (one `<x>\\t<posterior>` line per member)

    Raises:
        (UsageError): no observation, no model, or several gammas
        (ModelValidationError): bad model file or unknown glyph in z
        (ImpossibleObservationError): z has probability zero
        (CapExceededError): the core would exceed config.cap
    """
    if len(config.gammas) != 1:
        raise UsageError(f"build takes exactly one gamma, got {list(config.gammas)}")
    if config.z is None:
        raise UsageError("build needs an observation (--z)")
    if model is None:
        model = config.load_model()

    z = parse_observation(model, config.z)
    gamma = config.gammas[0]
    logger.info("Building the gamma = %s confidence set of %s (t = %d)", gamma, config.z, len(z))
    cs = build_confidence_set(enumerate_descending(compile_trellis(model, z)), gamma, config.cap)
    logger.info("Core of %d sequences, boundary %s, expected size %.6g", len(cs.core),
                "present" if cs.boundary is not None else "absent", cs.expected_size)
    return cs, format_confidence_set(cs, model.input_alphabet)
