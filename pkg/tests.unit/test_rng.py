##
# Unit tests for seed derivation.
#
# Copyright (c) confsetlib contributors
#
# SPDX-License-Identifier: BSD-2-Clause-Patent
##
import numpy as np
import pytest
from confsetlib.rng import PATH_STREAM, UNIFORM_STREAM, derive_seed, generator


def test_derive_seed_is_deterministic_and_keyed():
    assert derive_seed(1234, 17) == derive_seed(1234, 17)
    seeds = {derive_seed(1234, trial) for trial in range(100)}
    assert len(seeds) == 100
    assert derive_seed(1234, 1, 2) != derive_seed(1234, 2, 1)
    assert derive_seed(1234, 17) != derive_seed(1235, 17)
    assert all(0 <= seed < 2**64 for seed in seeds)


def test_derive_seed_accepts_full_u64_base():
    assert 0 <= derive_seed(2**64 - 1, 0) < 2**64


def test_derive_seed_rejects_negative():
    with pytest.raises(ValueError):
        derive_seed(-1, 0)
    with pytest.raises(ValueError):
        derive_seed(0, -3)


def test_generator_streams():
    seed = derive_seed(7, 0)
    a = generator(seed, PATH_STREAM).random(8)
    b = generator(seed, PATH_STREAM).random(8)
    c = generator(seed, UNIFORM_STREAM).random(8)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)


def test_generator_passes_through():
    rng = np.random.default_rng(0)
    assert generator(rng) is rng
    assert isinstance(generator(5).bit_generator, np.random.Philox)
