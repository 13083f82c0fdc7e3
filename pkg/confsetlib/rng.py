##
# Counter-based, splittable random number generation for reproducible experiments.
#
# Copyright (c) confsetlib contributors
#
# SPDX-License-Identifier: BSD-2-Clause-Patent
##
"""Seed derivation and generator construction.

Every trial of an experiment owns a 64-bit seed derived from the base seed and
the trial's integer keys. Generators are `Philox` (a counter-based bit
generator) keyed by that seed and a stream number, so a trial can be replayed
in isolation and results do not depend on the number of workers.

Example:
    ```python
    seed = derive_seed(1234, 17)          # trial 17
    path_rng = generator(seed, PATH_STREAM)
    u_rng = generator(seed, UNIFORM_STREAM)
    ```
"""

from typing import Union

import numpy as np

PATH_STREAM = 0
UNIFORM_STREAM = 1

SeedLike = Union[int, np.random.Generator]


def derive_seed(base_seed: int, *keys: int) -> int:
    """Hashes a base seed and integer keys into a 64-bit seed.

    Args:
        base_seed: non-negative base seed of the run
        *keys: non-negative integers identifying the unit of work (trial index, t, sample, ...)

    Returns:
        (int): derived seed in [0, 2**64)
    """
    if base_seed < 0 or any(k < 0 for k in keys):
        raise ValueError("Seeds and seed keys must be non-negative")
    sequence = np.random.SeedSequence(base_seed, spawn_key=tuple(keys))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def generator(seed: SeedLike, stream: int = PATH_STREAM) -> np.random.Generator:
    """Returns a Philox generator for (seed, stream).

    An existing Generator is returned unchanged, so functions can accept either form.
    """
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed), spawn_key=(stream,))))
