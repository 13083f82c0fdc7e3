##
# Randomized confidence sets built from a ranked posterior stream.
#
# Copyright (c) confsetlib contributors
#
# SPDX-License-Identifier: BSD-2-Clause-Patent
##
"""Confidence sets with exact coverage.

Sequences are taken in rank order until their posterior mass first reaches the
confidence level gamma. All but the last form the deterministic core; the last
one (the boundary) is included with the probability that makes the covered mass
exactly gamma. When the core alone hits gamma (within `COVERAGE_TOLERANCE`) there
is no boundary.

Example:
    ```python
    stream = enumerate_descending(trellis)
    cs = build_confidence_set(stream, gamma=0.99)
    print(format_confidence_set(cs, model.input_alphabet))
    ```
"""

import itertools
import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence, Union

from confsetlib.errors import CapExceededError
from confsetlib.inference import PosteriorLevel, RankedItem
from confsetlib.models import Alphabet
from confsetlib.utility_functions import CompensatedSum

COVERAGE_TOLERANCE = 1e-12
DEFAULT_CAP = 2**20
EXHAUSTIVE_SUBSET_LIMIT = 16
RANKED_MASS_TOLERANCE = 1e-9

logger = logging.getLogger(__name__)


def _check_gamma(gamma: float) -> float:
    gamma = float(gamma)
    if not 0.0 < gamma < 1.0:
        raise ValueError(f"Confidence level must lie strictly between 0 and 1, got {gamma}")
    return gamma


@dataclass(frozen=True)
class BoundaryElement:
    """The randomized member of a confidence set.

    Attributes:
        item (RankedItem): the j-th ranked sequence
        inclusion_prob (float): probability of including it, in (0, 1]
    """

    item: RankedItem
    inclusion_prob: float


@dataclass(frozen=True)
class ConfidenceSet:
    """A confidence set of level gamma: deterministic core plus an optional boundary.

    Attributes:
        gamma (float): confidence level
        core (tuple[RankedItem, ...]): the first j - 1 ranked sequences
        boundary (BoundaryElement): the j-th sequence and its inclusion probability, or None
        core_mass (float): summed posterior of the core
    """

    gamma: float
    core: tuple[RankedItem, ...]
    boundary: Optional[BoundaryElement]
    core_mass: float

    @property
    def j(self) -> int:
        """Rank of the boundary element (one past the core)."""
        return len(self.core) + 1

    @property
    def member_count(self) -> int:
        """Core size plus one when there is a boundary."""
        return len(self.core) + (1 if self.boundary is not None else 0)

    @property
    def expected_size(self) -> float:
        """Size averaged over the randomization."""
        return len(self.core) + (self.boundary.inclusion_prob if self.boundary else 0.0)

    @property
    def coverage_mass(self) -> float:
        """Covered posterior mass; equals gamma."""
        if self.boundary is None:
            return self.core_mass
        return self.core_mass + self.boundary.inclusion_prob * self.boundary.item.posterior

    @property
    def length(self) -> int:
        """Length of the member sequences."""
        if self.core:
            return len(self.core[0].x)
        return len(self.boundary.item.x)

    @cached_property
    def core_sequences(self) -> frozenset:
        """The core sequences, for membership lookups."""
        return frozenset(item.x for item in self.core)


@dataclass(frozen=True)
class LevelSummary:
    """Size summary of a confidence set built from posterior levels.

    Attributes:
        gamma (float): confidence level
        core_count (int): number of core sequences
        boundary_posterior (float): posterior of the boundary sequence, None without boundary
        inclusion_prob (float): inclusion probability of the boundary, 0 without boundary
        expected_size (float): core_count + inclusion_prob
        levels_used (int): number of levels read
    """

    gamma: float
    core_count: int
    boundary_posterior: Optional[float]
    inclusion_prob: float
    expected_size: float
    levels_used: int


def build_confidence_set(stream: Iterable[RankedItem], gamma: float, cap: int = DEFAULT_CAP) -> ConfidenceSet:
    """Builds the confidence set of level gamma from a ranked stream.

    Args:
        stream: sequences in rank order (a fresh RankedStream or a brute force list)
        gamma: confidence level in (0, 1)
        cap: maximum core size

    Raises:
        (ValueError): gamma outside (0, 1)
        (CapExceededError): the core would exceed cap before reaching gamma
        (ImpossibleObservationError): propagated from the stream
    """
    gamma = _check_gamma(gamma)
    mass = CompensatedSum()
    core = []
    boundary = None
    last = None
    for item in stream:
        last = item
        p = item.posterior
        if mass.peek(p) > gamma + COVERAGE_TOLERANCE:
            boundary = BoundaryElement(item, (gamma - mass.value) / p)
            break
        if len(core) >= cap:
            raise CapExceededError(cap, mass.value)
        core.append(item)
        mass.add(p)
        if mass.value >= gamma - COVERAGE_TOLERANCE:
            break
    else:
        if last is None:
            raise ValueError("Cannot build a confidence set from an empty stream")
        # Posteriors summed to slightly less than gamma; the last sequence becomes the boundary.
        core.pop()
        mass = CompensatedSum(item.posterior for item in core)
        inclusion = min(1.0, (gamma - mass.value) / last.posterior)
        logger.warning("Ranked stream exhausted below gamma = %s; boundary inclusion clamped to %s", gamma, inclusion)
        boundary = BoundaryElement(last, inclusion)

    cs = ConfidenceSet(gamma=gamma, core=tuple(core), boundary=boundary, core_mass=mass.value)
    logger.debug("Built confidence set: core %d, boundary %s, expected size %.6g", len(core), bool(boundary),
                 cs.expected_size)
    return cs


def randomized_membership(cs: ConfidenceSet, x: Sequence[int], u: float) -> bool:
    """Returns True if x is a member of the set for the uniform draw u.

    Args:
        cs: the confidence set
        x: candidate sequence as signal indices
        u: uniform draw in [0, 1), independent of (X, Z)

    Raises:
        (ValueError): x has the wrong length or u is outside [0, 1)
    """
    if len(x) != cs.length:
        raise ValueError(f"Sequence length {len(x)} does not match set length {cs.length}")
    if not 0.0 <= u < 1.0:
        raise ValueError(f"Uniform draw must lie in [0, 1), got {u}")
    x = tuple(x)
    if x in cs.core_sequences:
        return True
    return cs.boundary is not None and cs.boundary.item.x == x and u < cs.boundary.inclusion_prob


def expected_log_size(cs: Union[ConfidenceSet, LevelSummary]) -> float:
    """Returns log2 of the expected size; -inf for an empty set."""
    size = cs.expected_size
    return math.log2(size) if size > 0 else float("-inf")


def summarize_levels(levels: Iterable[PosteriorLevel], gamma: float) -> LevelSummary:
    """Computes the confidence set size from posterior levels without listing sequences.

    Members of a level are tied, so the boundary level contributes (gamma - mass before it) / q
    expected members, q being the posterior of one member.

    Raises:
        (ValueError): gamma outside (0, 1)
    """
    gamma = _check_gamma(gamma)
    mass = CompensatedSum()
    before = 0
    used = 0
    for level in levels:
        used += 1
        level_mass = level.mass
        if mass.peek(level_mass) > gamma + COVERAGE_TOLERANCE:
            q = 2.0**level.log_posterior
            members = (gamma - mass.value) / q
            whole = min(int(math.floor(members)), level.count - 1)
            inclusion = members - whole
            if inclusion <= COVERAGE_TOLERANCE:
                return LevelSummary(gamma, before + whole, None, 0.0, float(before + whole), used)
            return LevelSummary(gamma, before + whole, q, inclusion, before + members, used)
        before += level.count
        mass.add(level_mass)
        if mass.value >= gamma - COVERAGE_TOLERANCE:
            return LevelSummary(gamma, before, None, 0.0, float(before), used)
    logger.warning("Posterior levels exhausted below gamma = %s", gamma)
    return LevelSummary(gamma, before, None, 0.0, float(before), used)


def min_cardinality_for_mass(posteriors: Sequence[float], gamma: float) -> int:
    """Returns the smallest number of sequences whose posterior mass reaches gamma.

    Searches every subset, so it is limited to lists of at most 16 posteriors.

    Raises:
        (ValueError): the list is too long or no subset reaches gamma
    """
    if len(posteriors) > EXHAUSTIVE_SUBSET_LIMIT:
        raise ValueError(f"Exhaustive subset search is limited to {EXHAUSTIVE_SUBSET_LIMIT} sequences")
    for size in range(1, len(posteriors) + 1):
        for subset in itertools.combinations(posteriors, size):
            if math.fsum(subset) >= gamma - COVERAGE_TOLERANCE:
                return size
    raise ValueError(f"No subset of the posteriors reaches {gamma}")


def prefix_cardinality_for_mass(posteriors: Sequence[float], gamma: float) -> int:
    """Returns the smallest number of sequences whose posterior mass reaches gamma.

    The largest posteriors come first in any smallest subset, so sorting replaces the subset search.

    Raises:
        (ValueError): no subset reaches gamma
    """
    mass = CompensatedSum()
    for size, p in enumerate(sorted(posteriors, reverse=True), start=1):
        mass.add(p)
        if mass.value >= gamma - COVERAGE_TOLERANCE:
            return size
    raise ValueError(f"No subset of the posteriors reaches {gamma}")


def is_greedy_minimal(cs: ConfidenceSet, posteriors: Sequence[float]) -> bool:
    """Checks a set against a ranked posterior list computed independently of it.

    The first j - 1 posteriors of the list must stay below gamma and the first j must reach it,
    where j counts the core and the boundary.
    """
    members = cs.member_count
    if not 0 < members <= len(posteriors):
        return False
    before = math.fsum(posteriors[: members - 1])
    reached = math.fsum(posteriors[:members])
    return before < cs.gamma and reached >= cs.gamma - RANKED_MASS_TOLERANCE


def format_confidence_set(cs: ConfidenceSet, alphabet: Alphabet) -> str:
    """Serializes a set: one `<x>\\t<posterior>` line per member, boundary suffixed with `\\tp=<prob>`."""
    lines = [f"{alphabet.format(item.x)}\t{item.posterior:.17g}" for item in cs.core]
    if cs.boundary is not None:
        item = cs.boundary.item
        lines.append(f"{alphabet.format(item.x)}\t{item.posterior:.17g}\tp={cs.boundary.inclusion_prob:.17g}")
    return "".join(line + "\n" for line in lines)


def parse_confidence_set(text: str, alphabet: Alphabet, gamma: float) -> ConfidenceSet:
    """Reads a set written by `format_confidence_set`.

    Only posteriors are stored, so the returned items carry log_joint equal to log_posterior.

    Raises:
        (ValueError): malformed line, or a boundary line that is not the last line
    """
    gamma = _check_gamma(gamma)
    core = []
    boundary = None
    for number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        if boundary is not None:
            raise ValueError(f"Line {number}: members follow the boundary line")
        fields = line.split("\t")
        if len(fields) not in (2, 3):
            raise ValueError(f"Line {number}: expected 2 or 3 tab separated fields, got {len(fields)}")
        posterior = float(fields[1])
        if not 0.0 < posterior <= 1.0:
            raise ValueError(f"Line {number}: posterior {fields[1]} outside (0, 1]")
        log_posterior = math.log2(posterior)
        item = RankedItem(alphabet.parse(fields[0]), log_posterior, log_posterior)
        if len(fields) == 3:
            if not fields[2].startswith("p="):
                raise ValueError(f"Line {number}: boundary field must read p=<probability>")
            boundary = BoundaryElement(item, float(fields[2][2:]))
        else:
            core.append(item)
    core_mass = CompensatedSum(item.posterior for item in core).value
    return ConfidenceSet(gamma=gamma, core=tuple(core), boundary=boundary, core_mass=core_mass)
