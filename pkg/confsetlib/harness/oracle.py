##
# Oracle check: best-first enumeration and confidence sets against brute force on random models.
#
# Copyright (c) confsetlib contributors
#
# SPDX-License-Identifier: BSD-2-Clause-Patent
##
"""Oracle check.

Case 0 is the binary erasure example with posteriors 0.81, 0.09, 0.09, 0.01.
Cases 1..trials draw a random model (signal and channel kind, alphabet sizes,
sometimes with probabilities on a coarse grid so that ties occur), a length t
with at most 4096 sequences, an observation and a gamma, all from the generator
keyed by derive_seed(seed, case). Every case compares `enumerate_descending`
with `brute_force_ranked` and the sets built from both, and checks the exact
coverage identity and greedy minimality. Erasure cases are also rebuilt under
erasure_unknown and under iid erasure laws, which must give the same set.
"""

import logging
import math
from typing import Optional

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from confsetlib.confset import (
    ConfidenceSet,
    build_confidence_set,
    is_greedy_minimal,
    min_cardinality_for_mass,
    prefix_cardinality_for_mass,
)
from confsetlib.harness.config import ExperimentConfig
from confsetlib.harness.report import ExperimentReport
from confsetlib.inference import RankedItem, brute_force_ranked, enumerate_descending
from confsetlib.models import ModelSpec, compile_trellis, sample_path, validate_model
from confsetlib.rng import derive_seed, generator
from confsetlib.utility_functions import timing

COLUMNS = ["case", "seed", "channel", "t", "gamma", "items", "expected_size", "matched"]
CHUNK_SIZE = 50
SEQUENCE_LIMIT = 4096
POSTERIOR_TOLERANCE = 1e-9
SIZE_TOLERANCE = 1e-9
IDENTITY_TOLERANCE = 1e-12
INVARIANCE_TOLERANCE = 1e-12
INVARIANCE_PIS = (0.1, 0.5, 0.9)
EXHAUSTIVE_ITEMS = 16
RECOMMENDED_CASES = 200

GOLDEN_MODEL = {
    "alphabet": ["0", "1"],
    "signal": {"kind": "iid", "marginal": [0.9, 0.1]},
    "channel": {"kind": "erasure_unknown"},
}
GOLDEN_Z = "0*1*"
GOLDEN_GAMMA = 0.99
GOLDEN_RANKING = [("0010", 0.81), ("0011", 0.09), ("0110", 0.09), ("0111", 0.01)]

CASE_CHECKS = ("rank_equality", "expected_size_equality", "coverage_identity", "greedy_minimality",
               "exhaustive_minimality", "erasure_invariance")

logger = logging.getLogger(__name__)


def _probabilities(rng: np.random.Generator, size: int, allow_zero: bool, grid: bool) -> list[float]:
    if grid:
        weights = rng.integers(0 if allow_zero else 1, 5, size).astype(float)
    else:
        weights = rng.dirichlet(np.ones(size))
        if allow_zero and rng.random() < 0.3:
            weights[rng.integers(size)] = 0.0
    if weights.sum() == 0.0:
        weights[rng.integers(size)] = 1.0
    return (weights / weights.sum()).tolist()


def random_model_dict(rng: np.random.Generator) -> dict:
    """Draws a model file mapping with 2 to 4 signal symbols and any channel kind."""
    size = int(rng.integers(2, 5))
    grid = bool(rng.random() < 0.5)
    raw = {"alphabet": [str(i) for i in range(size)]}
    if rng.random() < 0.5:
        raw["signal"] = {"kind": "iid", "marginal": _probabilities(rng, size, True, grid)}
    else:
        raw["signal"] = {"kind": "markov", "transition": [_probabilities(rng, size, False, grid) for _ in range(size)]}

    kind = ("dmc", "erasure_known", "erasure_unknown")[int(rng.integers(3))]
    if kind == "dmc":
        outputs = int(rng.integers(2, 5))
        raw["output_alphabet"] = list("abcd"[:outputs])
        raw["channel"] = {"kind": "dmc", "matrix": [_probabilities(rng, outputs, True, grid) for _ in range(size)]}
    elif kind == "erasure_known":
        if rng.random() < 0.5:
            erasure = {"kind": "iid", "pi": round(float(rng.uniform(0.05, 0.95)), 3)}
        else:
            erasure = {"kind": "markov", "transition": [_probabilities(rng, 2, False, grid) for _ in range(2)]}
        raw["channel"] = {"kind": "erasure_known", "erasure": erasure}
    else:
        raw["channel"] = {"kind": "erasure_unknown"}
    return raw


def _same_ranking(left: list[RankedItem], right: list[RankedItem], tolerance: float) -> bool:
    if len(left) != len(right):
        return False
    return all(a.x == b.x and abs(a.posterior - b.posterior) <= tolerance for a, b in zip(left, right))


def _same_set(left: ConfidenceSet, right: ConfidenceSet, tolerance: float) -> bool:
    if [item.x for item in left.core] != [item.x for item in right.core]:
        return False
    if (left.boundary is None) != (right.boundary is None):
        return False
    if left.boundary is not None:
        if left.boundary.item.x != right.boundary.item.x:
            return False
        if abs(left.boundary.inclusion_prob - right.boundary.inclusion_prob) > tolerance * 1e3:
            return False
    return abs(left.expected_size - right.expected_size) <= tolerance * 1e3


def _variant(raw: dict, channel: dict) -> ModelSpec:
    variant = dict(raw)
    variant["channel"] = channel
    return validate_model(variant)


def check_case(model: ModelSpec, raw: dict, z: tuple[int, ...], gamma: float) -> tuple[dict, ConfidenceSet, int]:
    """Runs every comparison on one (model, z, gamma).

    Returns:
        (tuple): outcome per check name (None when not applicable), the set, and the ranked list length
    """
    trellis = compile_trellis(model, z)
    brute = brute_force_ranked(trellis)
    ranked = list(enumerate_descending(trellis))
    cs = build_confidence_set(ranked, gamma)
    cs_brute = build_confidence_set(brute, gamma)

    outcome = dict.fromkeys(CASE_CHECKS)
    outcome["rank_equality"] = _same_ranking(ranked, brute, POSTERIOR_TOLERANCE)
    outcome["expected_size_equality"] = abs(cs.expected_size - cs_brute.expected_size) <= SIZE_TOLERANCE
    outcome["coverage_identity"] = abs(cs.coverage_mass - gamma) <= IDENTITY_TOLERANCE
    posteriors = [item.posterior for item in brute]
    outcome["greedy_minimality"] = is_greedy_minimal(cs, posteriors)
    if len(posteriors) <= EXHAUSTIVE_ITEMS:
        smallest = min_cardinality_for_mass(posteriors, gamma)
    else:
        smallest = prefix_cardinality_for_mass(posteriors, gamma)
    outcome["exhaustive_minimality"] = smallest == cs.member_count

    if model.channel.is_erasure:
        glyph = model.channel.erasure_glyph
        unknown = _variant(raw, {"kind": "erasure_unknown", "erasure_glyph": glyph})
        reference = list(enumerate_descending(compile_trellis(unknown, z)))
        reference_set = build_confidence_set(reference, gamma)
        same = True
        for pi in INVARIANCE_PIS:
            erasure = {"kind": "iid", "pi": pi}
            known = _variant(raw, {"kind": "erasure_known", "erasure_glyph": glyph, "erasure": erasure})
            items = list(enumerate_descending(compile_trellis(known, z)))
            same = same and _same_ranking(reference, items, INVARIANCE_TOLERANCE)
            same = same and _same_set(reference_set, build_confidence_set(items, gamma), INVARIANCE_TOLERANCE)
        outcome["erasure_invariance"] = same
    return outcome, cs, len(ranked)


def _run_cases(base_seed: int, start: int, stop: int) -> list[tuple[dict, Optional[dict]]]:
    results = []
    for case in range(start, stop):
        seed = derive_seed(base_seed, case)
        rng = generator(seed)
        raw = random_model_dict(rng)
        model = validate_model(raw)
        max_t = min(10, int(math.floor(math.log(SEQUENCE_LIMIT) / math.log(model.input_alphabet.size))))
        t = int(rng.integers(1, max_t + 1))
        surrogate = float(rng.uniform(0.1, 0.9)) if model.channel.kind.value == "erasure_unknown" else None
        _, z = sample_path(model, t, rng, surrogate)
        gamma = float(rng.uniform(0.05, 0.99))

        outcome, cs, items = check_case(model, raw, z, gamma)
        failed = [name for name, ok in outcome.items() if ok is False]
        row = {
            "case": case,
            "seed": seed,
            "channel": model.channel.kind.value,
            "t": t,
            "gamma": gamma,
            "items": items,
            "expected_size": cs.expected_size,
            "matched": int(not failed),
            "_outcome": outcome,
        }
        repro = None
        if failed:
            repro = {"case": case, "seed": str(seed), "model": raw, "z": model.output_alphabet.format(z),
                     "gamma": gamma, "failed": failed}
            logger.error("Oracle case %d failed %s: %s", case, failed, repro)
        results.append((row, repro))
    return results


def golden_case() -> tuple[bool, ConfidenceSet, str]:
    """Checks the binary erasure example; returns outcome, set and a message."""
    model = validate_model(GOLDEN_MODEL)
    z = model.output_alphabet.parse(GOLDEN_Z)
    ranked = list(enumerate_descending(compile_trellis(model, z)))
    got = [(model.input_alphabet.format(item.x), item.posterior) for item in ranked]
    ranking_ok = len(got) == len(GOLDEN_RANKING) and all(
        x == ex and abs(p - ep) <= IDENTITY_TOLERANCE for (x, p), (ex, ep) in zip(got, GOLDEN_RANKING)
    )
    cs = build_confidence_set(ranked, GOLDEN_GAMMA)
    members = [model.input_alphabet.format(item.x) for item in cs.core]
    set_ok = members == ["0010", "0011", "0110"] and cs.boundary is None and abs(cs.expected_size - 3.0) <= 1e-12
    return ranking_ok and set_ok, cs, f"ranking {got}, set {members}, boundary {cs.boundary is not None}"


@timing
def oracle_check(config: ExperimentConfig) -> ExperimentReport:
    """Runs the golden case and `config.trials` random cases."""
    if config.trials < RECOMMENDED_CASES:
        logger.warning("Only %d oracle cases; at least %d are recommended", config.trials, RECOMMENDED_CASES)
    logger.info("Oracle check: %d random cases", config.trials)

    golden_ok, golden_set, golden_message = golden_case()
    rows = [{"case": 0, "seed": None, "channel": "erasure_unknown", "t": 4, "gamma": GOLDEN_GAMMA, "items": 4,
             "expected_size": golden_set.expected_size, "matched": int(golden_ok)}]
    reproducers = []
    if not golden_ok:
        reproducers.append({"case": 0, "model": GOLDEN_MODEL, "z": GOLDEN_Z, "gamma": GOLDEN_GAMMA,
                            "failed": ["golden_example"]})

    bounds = [(start, min(start + CHUNK_SIZE, config.trials + 1)) for start in range(1, config.trials + 1, CHUNK_SIZE)]
    chunks = Parallel(n_jobs=config.workers)(delayed(_run_cases)(config.seed, start, stop) for start, stop in bounds)
    outcomes = []
    for chunk in chunks:
        for row, repro in chunk:
            outcomes.append(row.pop("_outcome"))
            rows.append(row)
            if repro is not None:
                reproducers.append(repro)

    frame = pd.DataFrame(rows, columns=COLUMNS)
    frame["seed"] = frame["seed"].astype("object")
    report = ExperimentReport("oracle", COLUMNS, frame)
    if reproducers:
        report.attachments["repro"] = reproducers

    report.add_check("golden_example", golden_ok, float(golden_ok), 1.0, 0.0, golden_message)
    for name in CASE_CHECKS:
        applicable = [ok for ok in (outcome[name] for outcome in outcomes) if ok is not None]
        failures = sum(1 for ok in applicable if not ok)
        report.summary[f"{name}_cases"] = len(applicable)
        report.add_check(name, failures == 0, failures, 0.0, 0.0,
                         f"{failures} failures in {len(applicable)} applicable cases")
    report.summary["cases"] = config.trials
    report.summary["mismatched_cases"] = int((frame["matched"] == 0).sum())
    return report
