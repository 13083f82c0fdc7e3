##
# Posterior computations on a compiled trellis and enumeration of signal
# sequences in descending posterior order.
#
# Copyright (c) confsetlib contributors
#
# SPDX-License-Identifier: BSD-2-Clause-Patent
##
"""Observation marginal and ranked enumeration of signal sequences.

Sequences are ranked by descending posterior P(x | z); sequences whose log2
weights lie within `TIE_TOLERANCE` of the leading weight of their group are
ranked lexicographically (alphabet order). Sequences of posterior zero are never
emitted.

Two enumerators implement the same order:

* `enumerate_descending` runs a best-first search over trellis prefixes using the
  exact max-suffix table from `backward_max_suffix` as heuristic.
* `brute_force_ranked` scores every sequence and sorts; it is the oracle.

For memoryless models `enumerate_levels` walks the distinct posterior values
instead of the sequences, which is how set sizes of 2^30 and beyond are reached.
"""

import heapq
import itertools
import logging
import math
from collections import Counter, deque
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from confsetlib.errors import EnumerationLimitError, GuardExceededError, ImpossibleObservationError
from confsetlib.models import ModelSpec, Trellis, compile_trellis, joint_log_prob

TIE_TOLERANCE = 1e-12
DEFAULT_LIMIT = 2**22
BRUTE_FORCE_GUARD = 2**20
LEVEL_GUARD = 2**20

NEG_INF = float("-inf")

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RankedItem:
    """One enumerated sequence.

    Attributes:
        x (tuple[int, ...]): the sequence as signal indices
        log_joint (float): path log2-weight
        log_posterior (float): log2 P(x | z)
    """

    x: tuple[int, ...]
    log_joint: float
    log_posterior: float

    @property
    def posterior(self) -> float:
        """P(x | z)."""
        return 2.0**self.log_posterior


def forward_log_marginal(trellis: Trellis) -> float:
    """Returns log2 of the summed path weight of all sequences.

    This is log2 P(z) for dmc and erasure_known trellises, and log2 of the normalizing constant
    for erasure_unknown ones. -inf means the observation is impossible.
    """
    lw = trellis.log_weights
    with np.errstate(divide="ignore", invalid="ignore"):
        alpha = lw[0, 0].copy()
        for i in range(1, trellis.t):
            alpha = np.logaddexp2.reduce(alpha[:, None] + lw[i], axis=0)
        return float(np.logaddexp2.reduce(alpha))


def backward_max_suffix(trellis: Trellis) -> np.ndarray:
    """Returns V with V[i, s] the best suffix log2-weight after position i in state s.

    Positions are 0-based; V[t - 1, s] = 0. -inf marks states with no allowed completion.
    """
    lw = trellis.log_weights
    suffix = np.zeros((trellis.t, trellis.num_states))
    for i in range(trellis.t - 2, -1, -1):
        suffix[i] = np.max(lw[i + 1] + suffix[i + 1][None, :], axis=1)
    return suffix


def all_path_log_weights(trellis: Trellis) -> np.ndarray:
    """Returns the log2-weight of every sequence, flattened in lexicographic order.

    The weights are accumulated in position order, exactly like `joint_log_prob`.
    """
    lw = trellis.log_weights
    weights = lw[0, 0].copy()
    for i in range(1, trellis.t):
        weights = weights[..., :, None] + lw[i]
    return weights.reshape(-1)


def posterior_log_prob(trellis: Trellis, x: Sequence[int]) -> float:
    """Returns log2 P(x | z).

    Raises:
        (ImpossibleObservationError): the observation has probability zero
        (ValueError): x has the wrong length
    """
    normalizer = forward_log_marginal(trellis)
    if normalizer == NEG_INF:
        raise ImpossibleObservationError(trellis.observation_text)
    return joint_log_prob(trellis, x) - normalizer


class RankedStream(object):
    """Lazy iterator over sequences in descending posterior order, ties lexicographic.

    Single consumer; not safe for concurrent advancement.

    Attributes:
        trellis (Trellis): the source trellis
        normalizer (float): log2 of the summed path weight
        limit (int): maximum number of items to emit
        emitted (int): number of items emitted so far

    Iteration raises `StopIteration` once every positive-posterior sequence was emitted and
    `EnumerationLimitError` when `limit` items were emitted and more remain.
    """

    def __init__(self, trellis: Trellis, limit: int = DEFAULT_LIMIT) -> "RankedStream":
        """Inits the search frontier.

        Raises:
            (ImpossibleObservationError): the observation has probability zero
        """
        if limit < 1:
            raise ValueError(f"Enumeration limit must be positive, got {limit}")
        self.trellis = trellis
        self.limit = limit
        self.emitted = 0
        self.normalizer = forward_log_marginal(trellis)
        if self.normalizer == NEG_INF:
            raise ImpossibleObservationError(trellis.observation_text)

        self._t = trellis.t
        self._steps = trellis.log_weights.tolist()
        self._suffix = backward_max_suffix(trellis).tolist()
        # Frontier entries: (-priority, prefix, prefix weight). Equal priorities pop in
        # lexicographic prefix order.
        self._frontier = []
        self._ready = deque()
        first = self._steps[0][0]
        for s in range(trellis.num_states):
            priority = first[s] + self._suffix[0][s]
            if priority != NEG_INF:
                self._frontier.append((-priority, (s,), first[s]))
        heapq.heapify(self._frontier)

    def __iter__(self) -> "RankedStream":
        """Returns self."""
        return self

    def __next__(self) -> RankedItem:
        """Returns the next sequence in rank order."""
        if self.emitted >= self.limit:
            if self.exhausted:
                raise StopIteration
            raise EnumerationLimitError(self.limit)
        if not self._ready and not self._complete_next_group():
            raise StopIteration
        prefix, weight = self._ready.popleft()
        self.emitted += 1
        return RankedItem(prefix, weight, weight - self.normalizer)

    @property
    def exhausted(self) -> bool:
        """True when every positive-posterior sequence has been emitted."""
        return not self._ready and not self._frontier

    def _expand(self, prefix: tuple[int, ...], weight: float) -> None:
        i = len(prefix)
        row = self._steps[i][prefix[-1]]
        suffix = self._suffix[i]
        for s, step in enumerate(row):
            if step == NEG_INF:
                continue
            extended = weight + step
            priority = extended + suffix[s]
            if priority != NEG_INF:
                heapq.heappush(self._frontier, (-priority, prefix + (s,), extended))

    def _complete_next_group(self) -> bool:
        """Moves the next group of tied complete sequences to the ready queue.

        Returns False when the frontier is exhausted.
        """
        frontier = self._frontier
        while frontier:
            _, prefix, weight = heapq.heappop(frontier)
            if len(prefix) == self._t:
                break
            self._expand(prefix, weight)
        else:
            return False

        group = [(prefix, weight)]
        best = weight
        # The heuristic is exact, so nothing left on the frontier can complete above its priority.
        while frontier and -frontier[0][0] >= best - TIE_TOLERANCE:
            _, prefix, weight = heapq.heappop(frontier)
            if len(prefix) == self._t:
                group.append((prefix, weight))
                best = max(best, weight)
            else:
                self._expand(prefix, weight)

        tied = []
        for prefix, weight in group:
            if weight >= best - TIE_TOLERANCE:
                tied.append((prefix, weight))
            else:
                heapq.heappush(frontier, (-weight, prefix, weight))
        tied.sort(key=lambda entry: entry[0])
        self._ready.extend(tied)
        return True


def enumerate_descending(trellis: Trellis, limit: int = DEFAULT_LIMIT) -> RankedStream:
    """Returns a RankedStream over the trellis.

    Args:
        trellis: compiled observation
        limit: maximum number of items the stream may emit

    Raises:
        (ImpossibleObservationError): the observation has probability zero
    """
    return RankedStream(trellis, limit)


def brute_force_ranked(trellis: Trellis, guard: int = BRUTE_FORCE_GUARD) -> list[RankedItem]:
    """Scores every sequence and returns the positive-posterior ones in rank order.

    Raises:
        (GuardExceededError): |X|^t exceeds the guard
        (ImpossibleObservationError): the observation has probability zero
    """
    size = trellis.num_states
    if size**trellis.t > guard:
        raise GuardExceededError(f"{size}^{trellis.t} sequences exceed the brute force guard of {guard}")
    normalizer = forward_log_marginal(trellis)
    if normalizer == NEG_INF:
        raise ImpossibleObservationError(trellis.observation_text)

    weights = all_path_log_weights(trellis)
    candidates = np.flatnonzero(np.isfinite(weights))
    order = candidates[np.argsort(-weights[candidates], kind="stable")]
    ranked_weights = weights[order].tolist()
    coords = np.array(np.unravel_index(order, (size,) * trellis.t)).T.tolist()

    items = []
    start = 0
    while start < len(order):
        lead = ranked_weights[start]
        end = start
        while end < len(order) and ranked_weights[end] >= lead - TIE_TOLERANCE:
            end += 1
        group = sorted(range(start, end), key=lambda k: coords[k])
        for k in group:
            w = ranked_weights[k]
            items.append(RankedItem(tuple(coords[k]), w, w - normalizer))
        start = end
    return items


@dataclass(frozen=True)
class PosteriorLevel:
    """A set of sequences sharing one posterior value.

    Attributes:
        log_posterior (float): log2 P(x | z) of every member
        count (int): exact number of members
    """

    log_posterior: float
    count: int

    @property
    def log_mass(self) -> float:
        """log2 of the level's total posterior mass."""
        return math.log2(self.count) + self.log_posterior

    @property
    def mass(self) -> float:
        """Total posterior mass of the level."""
        return 2.0**self.log_mass


def _compositions(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """Yields every way to write n as an ordered sum of k non-negative parts."""
    for bars in itertools.combinations(range(n + k - 1), k - 1):
        parts = []
        previous = -1
        for bar in bars:
            parts.append(bar - previous - 1)
            previous = bar
        parts.append(n + k - 1 - previous - 1)
        yield tuple(parts)


def _multinomial(parts: Sequence[int]) -> int:
    count = 1
    total = 0
    for part in parts:
        total += part
        count *= math.comb(total, part)
    return count


def _glyph_options(log_posterior: np.ndarray, n: int, guard: int) -> list[tuple[float, int]]:
    """Distinct (log2 posterior, count) options of n exchangeable positions, best first."""
    support = sorted((float(v) for v in log_posterior if v != NEG_INF), reverse=True)
    k = len(support)
    if math.comb(n + k - 1, k - 1) > guard:
        raise GuardExceededError(f"{n} positions over {k} symbols exceed the level guard of {guard}")
    options = []
    for parts in _compositions(n, k):
        weight = 0.0
        for c, lp in zip(parts, support):
            weight += c * lp
        options.append((weight, _multinomial(parts)))
    options.sort(key=lambda option: -option[0])
    return options


def enumerate_levels(model: ModelSpec, z: Sequence[int], guard: int = LEVEL_GUARD) -> Iterator[PosteriorLevel]:
    """Yields the distinct posterior values of a memoryless model in descending order.

    For an iid signal through a memoryless channel P(x | z) is a product of per-position
    posteriors, and positions with the same observed glyph are exchangeable, so a level is a
    choice of symbol counts per observed glyph. Levels are produced lazily by best-first search
    over the product of the per-glyph option lists.

    Args:
        model: memoryless model (iid signal; dmc, iid erasure_known or erasure_unknown channel)
        z: observation as output indices
        guard: maximum number of count options per observed glyph

    Raises:
        (ValueError): the model is not memoryless
        (ImpossibleObservationError): some observed glyph has probability zero
        (GuardExceededError): too many options for one glyph
    """
    if not model.is_memoryless:
        raise ValueError("Posterior levels need an iid signal and a memoryless channel")
    counts = Counter(int(s) for s in z)
    glyph_options = []
    for glyph in sorted(counts):
        step = compile_trellis(model, (glyph,)).log_weights[0, 0]
        with np.errstate(divide="ignore", invalid="ignore"):
            normalizer = float(np.logaddexp2.reduce(step))
        if normalizer == NEG_INF:
            raise ImpossibleObservationError(model.output_alphabet.format(z))
        glyph_options.append(_glyph_options(step - normalizer, counts[glyph], guard))
    logger.debug("Level search over %d glyph groups of sizes %s", len(glyph_options), [len(o) for o in glyph_options])

    def total(index: tuple[int, ...]) -> float:
        weight = 0.0
        for options, k in zip(glyph_options, index):
            weight += options[k][0]
        return weight

    start = (0,) * len(glyph_options)
    frontier = [(-total(start), start)]
    seen = {start}
    while frontier:
        neg_weight, index = heapq.heappop(frontier)
        count = 1
        for options, k in zip(glyph_options, index):
            count *= options[k][1]
        yield PosteriorLevel(-neg_weight, count)
        for g in range(len(index)):
            if index[g] + 1 < len(glyph_options[g]):
                successor = index[:g] + (index[g] + 1,) + index[g + 1 :]
                if successor not in seen:
                    seen.add(successor)
                    heapq.heappush(frontier, (-total(successor), successor))
