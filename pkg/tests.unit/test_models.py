##
# Unit tests for model validation, sampling and trellis compilation.
#
# Copyright (c) confsetlib contributors
#
# SPDX-License-Identifier: BSD-2-Clause-Patent
##
import itertools
import math
import unittest

import numpy as np
import pytest
from confsetlib.errors import ModelValidationError, UsageError
from confsetlib.inference import forward_log_marginal
from confsetlib.models import (
    Alphabet,
    ChannelKind,
    ErasureKind,
    _sample_chain,
    compile_trellis,
    joint_log_prob,
    sample_path,
    stationary_distribution,
    validate_model,
)

GOLDEN = {
    "alphabet": ["0", "1"],
    "signal": {"kind": "iid", "marginal": [0.9, 0.1]},
    "channel": {"kind": "erasure_unknown"},
}
MARKOV_BSC = {
    "alphabet": ["0", "1"],
    "signal": {"kind": "markov", "transition": [[0.9, 0.1], [0.2, 0.8]]},
    "channel": {"kind": "dmc", "matrix": [[0.9, 0.1], [0.1, 0.9]]},
}
ERASURE_03 = {
    "alphabet": ["0", "1"],
    "signal": {"kind": "iid", "marginal": [0.9, 0.1]},
    "channel": {"kind": "erasure_known", "erasure": {"kind": "iid", "pi": 0.3}},
}


class AlphabetTest(unittest.TestCase):
    def test_parse_and_format(self):
        alphabet = Alphabet(("0", "1", "*"))
        self.assertEqual(alphabet.parse("0*1*"), (0, 2, 1, 2))
        self.assertEqual(alphabet.format((0, 2, 1, 2)), "0*1*")
        self.assertEqual(alphabet.decode((1, 0)), ("1", "0"))

    def test_multi_character_glyphs(self):
        alphabet = Alphabet(("ab", "cd", "*"))
        self.assertFalse(alphabet.single_character)
        self.assertEqual(alphabet.parse("ab, *,cd"), (0, 2, 1))
        self.assertEqual(alphabet.format((0, 2, 1)), "ab,*,cd")

    def test_invalid_alphabets(self):
        for symbols in [(), ("0", "0"), ("",), ("a b",), ("a,b",)]:
            with self.assertRaises(ModelValidationError):
                Alphabet(symbols)

    def test_unknown_glyph(self):
        with self.assertRaisesRegex(ModelValidationError, "not in alphabet"):
            Alphabet(("0", "1")).parse("012")


class ValidateModelTest(unittest.TestCase):
    def test_golden_model(self):
        model = validate_model(GOLDEN)
        self.assertIs(model.channel.kind, ChannelKind.ERASURE_UNKNOWN)
        self.assertEqual(model.output_alphabet.symbols, ("0", "1", "*"))
        self.assertEqual(model.erasure_index, 2)
        self.assertTrue(model.is_memoryless)

    def test_markov_initial_is_stationary(self):
        model = validate_model(MARKOV_BSC)
        np.testing.assert_allclose(model.signal.initial, [2 / 3, 1 / 3], atol=1e-12)
        self.assertFalse(model.is_memoryless)
        self.assertIsNone(model.erasure_index)

    def test_markov_initial_must_match(self):
        raw = dict(MARKOV_BSC, signal={"kind": "markov", "transition": [[0.9, 0.1], [0.2, 0.8]], "initial": [0.5, 0.5]})
        with self.assertRaisesRegex(ModelValidationError, "stationary"):
            validate_model(raw)

    def test_row_sum(self):
        raw = dict(MARKOV_BSC, signal={"kind": "markov", "transition": [[0.9, 0.1], [0.3, 0.8]]})
        with self.assertRaisesRegex(ModelValidationError, "signal.transition row 1 sums to 1.1"):
            validate_model(raw)

    def test_non_ergodic(self):
        periodic = dict(MARKOV_BSC, signal={"kind": "markov", "transition": [[0.0, 1.0], [1.0, 0.0]]})
        reducible = dict(MARKOV_BSC, signal={"kind": "markov", "transition": [[1.0, 0.0], [0.5, 0.5]]})
        for raw in (periodic, reducible):
            with self.assertRaisesRegex(ModelValidationError, "non-ergodic"):
                validate_model(raw)

    def test_erasure_rules(self):
        with self.assertRaisesRegex(ModelValidationError, "no numeric parameters"):
            validate_model(dict(GOLDEN, channel={"kind": "erasure_unknown", "pi": 0.3}))
        with self.assertRaisesRegex(ModelValidationError, "must not belong"):
            validate_model(dict(GOLDEN, channel={"kind": "erasure_unknown", "erasure_glyph": "1"}))
        with self.assertRaisesRegex(ModelValidationError, "strictly between"):
            validate_model(dict(ERASURE_03, channel={"kind": "erasure_known", "erasure": {"kind": "iid", "pi": 1.0}}))
        with self.assertRaisesRegex(ModelValidationError, "needs an 'erasure'"):
            validate_model(dict(GOLDEN, channel={"kind": "erasure_known"}))

    def test_dmc_output_alphabet(self):
        raw = {
            "alphabet": ["0", "1"],
            "output_alphabet": ["a", "b", "c"],
            "signal": {"kind": "iid", "marginal": [0.5, 0.5]},
            "channel": {"kind": "dmc", "matrix": [[0.8, 0.2, 0.0], [0.0, 0.2, 0.8]]},
        }
        model = validate_model(raw)
        self.assertEqual(model.output_alphabet.symbols, ("a", "b", "c"))
        self.assertEqual(model.to_dict()["output_alphabet"], ["a", "b", "c"])
        with self.assertRaisesRegex(ModelValidationError, "shape"):
            validate_model(dict(raw, channel={"kind": "dmc", "matrix": [[1.0, 0.0], [0.0, 1.0]]}))

    def test_unknown_kinds(self):
        with self.assertRaises(ModelValidationError):
            validate_model(dict(GOLDEN, signal={"kind": "hmm"}))
        with self.assertRaises(ModelValidationError):
            validate_model(dict(GOLDEN, channel={"kind": "awgn"}))
        with self.assertRaisesRegex(ModelValidationError, "missing 'channel'"):
            validate_model({"alphabet": ["0"], "signal": {"kind": "iid", "marginal": [1.0]}})

    def test_to_dict_round_trip(self):
        for raw in (GOLDEN, MARKOV_BSC, ERASURE_03):
            model = validate_model(raw)
            again = validate_model(model.to_dict())
            self.assertEqual(again.to_dict(), model.to_dict())

    def test_with_surrogate(self):
        model = validate_model(GOLDEN).with_surrogate(0.3)
        self.assertIs(model.channel.kind, ChannelKind.ERASURE_KNOWN)
        self.assertIs(model.channel.erasure.kind, ErasureKind.IID)
        self.assertEqual(model.channel.erasure.erasure_probability, 0.3)
        with self.assertRaises(UsageError):
            validate_model(MARKOV_BSC).with_surrogate(0.3)


def test_stationary_distribution():
    pi = stationary_distribution([[0.5, 0.5, 0.0], [0.25, 0.5, 0.25], [0.0, 0.5, 0.5]])
    np.testing.assert_allclose(pi, [0.25, 0.5, 0.25], atol=1e-12)
    with pytest.raises(ModelValidationError, match="square"):
        stationary_distribution([[1.0, 0.0]])


@pytest.mark.parametrize(
    "transition",
    [
        [[0.9, 0.1], [0.2, 0.8]],
        np.random.default_rng(3).dirichlet(np.ones(4), size=4),
        np.random.default_rng(4).dirichlet(np.full(6, 0.5), size=6),
    ],
)
def test_stationary_distribution_residual(transition):
    pi = stationary_distribution(transition)
    assert pi.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.max(np.abs(pi @ np.asarray(transition) - pi)) <= 1e-12


def test_stationary_distribution_two_states():
    np.testing.assert_allclose(stationary_distribution([[0.9, 0.1], [0.2, 0.8]]), [2 / 3, 1 / 3], atol=1e-12)


def _observation_probability(prior, channel, z):
    """P(z) summed straight from the joint law, without the trellis."""
    total = []
    for x in itertools.product(range(2), repeat=len(z)):
        p = prior(x)
        for xi, zi in zip(x, z):
            p *= channel(xi, zi)
        total.append(p)
    return math.fsum(total)


def _markov_prior(x):
    transition = [[0.9, 0.1], [0.2, 0.8]]
    p = [2 / 3, 1 / 3][x[0]]
    for a, b in zip(x, x[1:]):
        p *= transition[a][b]
    return p


def _iid_prior(x):
    return math.prod([0.9, 0.1][xi] for xi in x)


def _erasure_03(xi, zi):
    return 0.3 if zi == "*" else 0.7 * (int(zi) == xi)


@pytest.mark.parametrize(
    "raw, prior, channel, text",
    [
        (MARKOV_BSC, _markov_prior, lambda xi, zi: [[0.9, 0.1], [0.1, 0.9]][xi][int(zi)], "01101"),
        (ERASURE_03, _iid_prior, _erasure_03, "0*1*0"),
        (ERASURE_03, _iid_prior, _erasure_03, "**0**"),
    ],
)
def test_joint_law_sums_to_observation_probability(raw, prior, channel, text):
    model = validate_model(raw)
    z = model.output_alphabet.parse(text)
    trellis = compile_trellis(model, z)
    expected = _observation_probability(prior, channel, text)
    summed = math.fsum(2 ** joint_log_prob(trellis, x) for x in itertools.product(range(2), repeat=len(z)))
    assert summed == pytest.approx(expected, rel=1e-12)
    assert 2 ** forward_log_marginal(trellis) == pytest.approx(expected, rel=1e-12)


def test_markov_erasure_probability():
    raw = dict(ERASURE_03, channel={"kind": "erasure_known",
                                    "erasure": {"kind": "markov", "transition": [[0.8, 0.2], [0.4, 0.6]]}})
    model = validate_model(raw)
    assert model.channel.erasure.erasure_probability == pytest.approx(1 / 3, abs=1e-12)
    assert not model.is_memoryless


def test_sample_path_is_reproducible():
    model = validate_model(MARKOV_BSC)
    first = sample_path(model, 50, 1234)
    second = sample_path(model, 50, 1234)
    assert first == second
    x, z = first
    assert len(x) == len(z) == 50
    assert sample_path(model, 50, 1235) != first


def test_sample_path_erasures():
    model = validate_model(ERASURE_03)
    x, z = sample_path(model, 2000, 7)
    erased = [i for i, s in enumerate(z) if s == model.erasure_index]
    # 4 sigma around pi * t
    assert abs(len(erased) - 600) < 4 * math.sqrt(2000 * 0.3 * 0.7)
    assert all(z[i] == x[i] for i in range(2000) if i not in set(erased))


def test_sample_path_unknown_erasure_needs_surrogate():
    model = validate_model(GOLDEN)
    with pytest.raises(UsageError):
        sample_path(model, 5, 0)
    x, z = sample_path(model, 5, 0, surrogate_pi=0.5)
    assert len(z) == 5
    with pytest.raises(ValueError):
        sample_path(model, 0, 0, surrogate_pi=0.5)


def test_sample_chain_skips_zero_mass_tail():
    # the last state has no mass and the others sum to 1 only up to rounding
    initial = np.array([0.1] * 8 + [0.2, 0.0])
    transition = np.tile(initial, (10, 1))
    below_one = np.nextafter(1.0, 0.0)
    states = _sample_chain(initial, transition, np.array([below_one, below_one, 0.0, 0.95]))
    assert states.tolist() == [8, 8, 0, 8]


def test_sample_path_never_emits_zero_probability_output():
    model = validate_model(
        {
            "alphabet": ["a", "b", "c"],
            "signal": {"kind": "iid", "marginal": [0.2, 0.3, 0.5]},
            "channel": {"kind": "dmc", "matrix": [[0.7, 0.3, 0.0]] * 3},
        }
    )
    _, z = sample_path(model, 5000, 11)
    assert 2 not in z
    assert {0, 1} <= set(z)


def test_compile_trellis_golden():
    model = validate_model(GOLDEN)
    trellis = compile_trellis(model, model.output_alphabet.parse("0*1*"))
    assert trellis.t == 4
    assert trellis.num_states == 2
    assert trellis.observation_text == "0*1*"
    assert not trellis.normalized
    assert joint_log_prob(trellis, (1, 0, 1, 0)) == float("-inf")
    assert 2 ** joint_log_prob(trellis, (0, 0, 1, 0)) == pytest.approx(0.9 * 0.9 * 0.1 * 0.9, rel=1e-12)
    with pytest.raises(ValueError):
        joint_log_prob(trellis, (0, 0))


def test_compile_trellis_joint_matches_product():
    model = validate_model(MARKOV_BSC)
    trellis = compile_trellis(model, (0, 1, 1))
    assert trellis.normalized
    expected = (2 / 3) * 0.9 * (0.9 * 0.1) * (0.1 * 0.9)
    assert 2 ** joint_log_prob(trellis, (0, 0, 1)) == pytest.approx(expected, rel=1e-12)
    with pytest.raises(ValueError):
        compile_trellis(model, ())
    with pytest.raises(ValueError):
        compile_trellis(model, (0, 2))
