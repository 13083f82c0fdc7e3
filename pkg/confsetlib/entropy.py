##
# Conditional entropy rate of the signal given the observation.
#
# Copyright (c) confsetlib contributors
#
# SPDX-License-Identifier: BSD-2-Clause-Patent
##
"""Closed form, exact block and Monte Carlo values of h(X|Z) in bits per symbol.

h(X|Z) is the exponent at which the expected size of a confidence set grows with
the sequence length, so these values are the reference line of the growth
experiment.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np
from joblib import Parallel, delayed
from scipy import stats

from confsetlib.errors import ClosedFormUnavailableError, GuardExceededError, UsageError
from confsetlib.inference import all_path_log_weights, forward_log_marginal
from confsetlib.models import (
    ChannelKind,
    ErasureKind,
    ModelSpec,
    SignalKind,
    compile_trellis,
    joint_log_prob,
    sample_path,
)
from confsetlib.rng import derive_seed
from confsetlib.utility_functions import timing

BLOCK_GUARD = 2**24

logger = logging.getLogger(__name__)


class EntropyMethod(str, Enum):
    """How an estimate was obtained."""

    CLOSED_FORM = "closed_form"
    EXACT_BLOCK = "exact_block"
    SMB_MONTE_CARLO = "smb_monte_carlo"


class JointMode(str, Enum):
    """How `smb_estimate` obtains the joint term."""

    SAMPLED = "sampled"
    CLOSED_FORM = "closed_form"


@dataclass(frozen=True)
class EntropyEstimate:
    """A value of h(X|Z) in bits per symbol.

    Attributes:
        value (float): bits per symbol
        method (EntropyMethod): how it was obtained
        n (int): block or path length, None for a closed form
        std_error (float): standard error across replicates (Monte Carlo only)
        replicates (int): number of replicates (Monte Carlo only)
    """

    value: float
    method: EntropyMethod
    n: Optional[int] = None
    std_error: Optional[float] = None
    replicates: Optional[int] = None


def entropy_of_distribution(p: Sequence[float]) -> float:
    """Returns the Shannon entropy of a probability vector in bits, with 0 log 0 = 0."""
    p = np.asarray(p, dtype=float)
    if p.size == 0 or not np.any(p > 0):
        return 0.0
    return float(stats.entropy(p, base=2))


def _chain_entropy_rate(initial: np.ndarray, transition: np.ndarray) -> float:
    return math.fsum(float(initial[i]) * entropy_of_distribution(transition[i]) for i in range(initial.size))


def signal_entropy_rate(model: ModelSpec) -> float:
    """Returns h(X): H(X_1) for an iid signal, the stationary row entropy for a markov one."""
    signal = model.signal
    if signal.kind is SignalKind.IID:
        return entropy_of_distribution(signal.marginal)
    return _chain_entropy_rate(signal.initial, signal.transition)


def _determines_input(matrix: np.ndarray) -> bool:
    """True when every output symbol can come from at most one input symbol."""
    return bool(np.all((matrix > 0.0).sum(axis=0) <= 1))


def _clamp(value: float, model: ModelSpec) -> float:
    upper = math.log2(model.input_alphabet.size)
    if value < 0.0:
        if value < -1e-9:
            logger.warning("Clamped entropy value %.3g to 0", value)
        return 0.0
    return min(value, upper)


def closed_form_rate(model: ModelSpec) -> EntropyEstimate:
    """Returns h(X|Z) for models with a closed form.

    Covered: an iid signal with a dmc (H(X_1) + H(Z_1|X_1) - H(Z_1)), with iid erasures
    (pi H(X_1)) or with markov erasures (P(erased) H(X_1)); and any signal through a dmc whose
    output determines its input (0).

    Raises:
        (ClosedFormUnavailableError): the model has no closed form here
    """
    channel = model.channel
    if channel.kind is ChannelKind.DMC and _determines_input(channel.matrix):
        return EntropyEstimate(0.0, EntropyMethod.CLOSED_FORM)
    if model.signal.kind is not SignalKind.IID:
        raise ClosedFormUnavailableError("No closed form for a markov signal; use exact_block or smb")
    if channel.kind is ChannelKind.ERASURE_UNKNOWN:
        raise ClosedFormUnavailableError("erasure_unknown channel has no erasure law; supply a surrogate")

    marginal = model.signal.marginal
    h_x = entropy_of_distribution(marginal)
    if channel.kind is ChannelKind.DMC:
        matrix = channel.matrix
        h_z_given_x = math.fsum(float(marginal[a]) * entropy_of_distribution(matrix[a]) for a in range(marginal.size))
        value = h_x + h_z_given_x - entropy_of_distribution(marginal @ matrix)
    else:
        value = channel.erasure.erasure_probability * h_x
    return EntropyEstimate(_clamp(value, model), EntropyMethod.CLOSED_FORM)


def joint_entropy_rate(model: ModelSpec) -> float:
    """Returns h(X, Z) for a channel with known law.

    Raises:
        (ClosedFormUnavailableError): erasure_unknown channel
    """
    channel = model.channel
    h_x = signal_entropy_rate(model)
    if channel.kind is ChannelKind.DMC:
        stationary = model.signal.initial_distribution
        rows = [float(stationary[a]) * entropy_of_distribution(channel.matrix[a]) for a in range(stationary.size)]
        return h_x + math.fsum(rows)
    if channel.kind is ChannelKind.ERASURE_UNKNOWN:
        raise ClosedFormUnavailableError("erasure_unknown channel has no erasure law; supply a surrogate")
    erasure = channel.erasure
    if erasure.kind is ErasureKind.IID:
        return h_x + entropy_of_distribution([1.0 - erasure.pi, erasure.pi])
    return h_x + _chain_entropy_rate(erasure.initial, erasure.transition)


@timing
def exact_block_conditional_entropy(model: ModelSpec, n: int) -> EntropyEstimate:
    """Returns H(X_1..n | Z_1..n) / n by summing over every (x, z) pair.

    Raises:
        (UsageError): erasure_unknown channel, whose block entropy depends on the unknown erasure law
        (GuardExceededError): more than 2^24 pairs
    """
    if n < 1:
        raise ValueError(f"Block length must be at least 1, got {n}")
    if model.channel.kind is ChannelKind.ERASURE_UNKNOWN:
        raise UsageError("Block entropy of an erasure_unknown channel is undefined; use a surrogate erasure law")
    pairs = (model.input_alphabet.size * model.output_alphabet.size) ** n
    if pairs > BLOCK_GUARD:
        raise GuardExceededError(f"{pairs} (x, z) pairs exceed the block guard of {BLOCK_GUARD}")

    terms = []
    for z in itertools.product(range(model.output_alphabet.size), repeat=n):
        log_joint = all_path_log_weights(compile_trellis(model, z))
        finite = log_joint[np.isfinite(log_joint)]
        if finite.size == 0:
            continue
        log_z = float(np.logaddexp2.reduce(finite))
        terms.append(float(np.sum(np.exp2(finite) * (log_z - finite))))
    value = math.fsum(terms) / n
    logger.debug("Exact block entropy n=%d: %.12g", n, value)
    return EntropyEstimate(_clamp(value, model), EntropyMethod.EXACT_BLOCK, n=n)


def _smb_replicate(model: ModelSpec, n: int, seed: int, surrogate_pi: Optional[float], joint: JointMode,
                   joint_rate: Optional[float]) -> float:
    x, z = sample_path(model, n, seed, surrogate_pi)
    if model.channel.kind is ChannelKind.ERASURE_UNKNOWN:
        model = model.with_surrogate(surrogate_pi)
    trellis = compile_trellis(model, z)
    log_z = forward_log_marginal(trellis)
    if joint is JointMode.SAMPLED:
        return -(joint_log_prob(trellis, x) - log_z) / n
    return joint_rate + log_z / n


@timing
def smb_estimate(
    model: ModelSpec,
    n: int,
    reps: int,
    seed: int,
    surrogate_pi: Optional[float] = None,
    joint: str = "sampled",
    n_jobs: int = 1,
) -> EntropyEstimate:
    """Monte Carlo estimate of h(X|Z) from long sampled paths.

    With `joint="sampled"` each replicate contributes -(1/n) log2 P(x | z) on its own path. With
    `joint="closed_form"` it contributes h(X, Z) + (1/n) log2 P(z), the joint rate coming from
    `joint_entropy_rate`. Replicate r uses the seed derive_seed(seed, r), so the result does not
    depend on n_jobs.

    Args:
        model: the model
        n: path length
        reps: number of replicates
        seed: base seed
        surrogate_pi: erasure probability standing in for an erasure_unknown law
        joint: "sampled" or "closed_form"
        n_jobs: joblib worker count

    Raises:
        (UsageError): erasure_unknown without surrogate, or an unknown joint mode
    """
    if n < 1 or reps < 1:
        raise ValueError(f"Path length and replicate count must be positive, got n={n}, reps={reps}")
    try:
        joint = JointMode(joint)
    except ValueError:
        raise UsageError(f"Unknown joint mode {joint!r}; use 'sampled' or 'closed_form'") from None
    if model.channel.kind is ChannelKind.ERASURE_UNKNOWN and surrogate_pi is None:
        raise UsageError("smb estimate of an erasure_unknown channel needs a surrogate erasure probability")

    joint_rate = None
    if joint is JointMode.CLOSED_FORM:
        known = model.with_surrogate(surrogate_pi) if model.channel.kind is ChannelKind.ERASURE_UNKNOWN else model
        joint_rate = joint_entropy_rate(known)

    values = Parallel(n_jobs=n_jobs)(
        delayed(_smb_replicate)(model, n, derive_seed(seed, r), surrogate_pi, joint, joint_rate) for r in range(reps)
    )
    values = np.array(values, dtype=float)
    if not np.all(np.isfinite(values)):
        raise ValueError("A sampled path had probability zero under the model")
    mean = float(np.mean(values))
    std_error = float(np.std(values, ddof=1) / math.sqrt(reps)) if reps > 1 else 0.0
    logger.debug("smb estimate n=%d reps=%d: %.6g +- %.3g", n, reps, mean, std_error)
    return EntropyEstimate(_clamp(mean, model), EntropyMethod.SMB_MONTE_CARLO, n=n, std_error=std_error,
                           replicates=reps)
