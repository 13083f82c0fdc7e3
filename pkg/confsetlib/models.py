##
# Signal and channel models: validation, sampling and trellis compilation.
#
# Copyright (c) confsetlib contributors
#
# SPDX-License-Identifier: BSD-2-Clause-Patent
##
"""Joint law of a finite-alphabet signal X and its observation Z.

A model is described by a plain mapping (usually parsed from a JSON model file)
and turned into an immutable `ModelSpec` by `validate_model`. A fixed
observation z is compiled into a `Trellis` whose path weights factor the joint
measure of (x, z), which is everything the inference module needs.

Sequences are handled as tuples of symbol indices; `Alphabet` converts between
indices and glyph strings. Index order is the lexicographic order.

Example:
    ```python
    model = validate_model({
        "alphabet": ["0", "1"],
        "signal": {"kind": "iid", "marginal": [0.9, 0.1]},
        "channel": {"kind": "erasure_unknown"},
    })
    z = model.output_alphabet.parse("0*1*")
    trellis = compile_trellis(model, z)
    ```
"""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Mapping, Optional, Sequence

import numpy as np

from confsetlib.errors import ModelValidationError, UsageError
from confsetlib.rng import SeedLike, generator

ROW_TOLERANCE = 1e-12
STATIONARY_TOLERANCE = 1e-9
STATIONARY_RESIDUAL = 1e-12
DEFAULT_ERASURE_GLYPH = "*"

# Index order of the hidden erasure process {pass, erased}.
PASS, ERASED = 0, 1

logger = logging.getLogger(__name__)


class SignalKind(str, Enum):
    """Supported signal laws."""

    IID = "iid"
    MARKOV = "markov"


class ChannelKind(str, Enum):
    """Supported channel laws."""

    DMC = "dmc"
    ERASURE_KNOWN = "erasure_known"
    ERASURE_UNKNOWN = "erasure_unknown"


class ErasureKind(str, Enum):
    """Supported laws of the hidden erasure process."""

    IID = "iid"
    MARKOV = "markov"


def _frozen(values: Any) -> np.ndarray:  # noqa: ANN401
    array = np.array(values, dtype=float)
    array.flags.writeable = False
    return array


@dataclass(frozen=True)
class Alphabet:
    """Ordered set of glyphs; the order defines lexicographic comparison.

    Attributes:
        symbols (tuple[str, ...]): the glyphs in alphabet order
    """

    symbols: tuple[str, ...]

    def __post_init__(self) -> None:
        """Validates the glyph list."""
        if len(self.symbols) == 0:
            raise ModelValidationError("Alphabet must not be empty")
        if len(set(self.symbols)) != len(self.symbols):
            raise ModelValidationError(f"Alphabet {list(self.symbols)} contains duplicate glyphs")
        for glyph in self.symbols:
            if not isinstance(glyph, str) or glyph == "" or "," in glyph or any(c.isspace() for c in glyph):
                raise ModelValidationError(f"Invalid glyph {glyph!r}: use non-empty glyphs without commas or spaces")

    @property
    def size(self) -> int:
        """Number of glyphs."""
        return len(self.symbols)

    @property
    def single_character(self) -> bool:
        """True when every glyph is one character long."""
        return all(len(g) == 1 for g in self.symbols)

    def index(self, glyph: str) -> int:
        """Returns the index of a glyph."""
        try:
            return self.symbols.index(glyph)
        except ValueError:
            raise ModelValidationError(f"Glyph {glyph!r} is not in alphabet {list(self.symbols)}") from None

    def encode(self, glyphs: Sequence[str]) -> tuple[int, ...]:
        """Converts a glyph sequence to an index tuple."""
        return tuple(self.index(g) for g in glyphs)

    def decode(self, sequence: Sequence[int]) -> tuple[str, ...]:
        """Converts an index sequence to glyphs."""
        return tuple(self.symbols[i] for i in sequence)

    def parse(self, text: str) -> tuple[int, ...]:
        """Parses an observation string.

        Single-character alphabets accept whitespace-free glyph strings ("0*1*"); otherwise, or
        whenever the text contains a comma, glyphs are comma separated ("a,b,*").
        """
        text = text.strip()
        if text == "":
            raise ModelValidationError("Empty sequence")
        if "," in text or not self.single_character:
            glyphs = [g.strip() for g in text.split(",")]
        else:
            glyphs = list(text)
        return self.encode(glyphs)

    def format(self, sequence: Sequence[int]) -> str:
        """Formats an index sequence the way `parse` reads it."""
        separator = "" if self.single_character else ","
        return separator.join(self.decode(sequence))


@dataclass(frozen=True, eq=False)
class SignalModel:
    """Law of the signal X.

    Attributes:
        kind (SignalKind): iid or markov
        marginal (np.ndarray): per-symbol law (iid only)
        transition (np.ndarray): row-stochastic matrix (markov only)
        initial (np.ndarray): stationary law of `transition` (markov only)
    """

    kind: SignalKind
    marginal: Optional[np.ndarray] = None
    transition: Optional[np.ndarray] = None
    initial: Optional[np.ndarray] = None

    @property
    def initial_distribution(self) -> np.ndarray:
        """Law of X_1."""
        return self.marginal if self.kind is SignalKind.IID else self.initial

    @property
    def transition_matrix(self) -> np.ndarray:
        """P(x_i | x_{i-1}); every row equals the marginal for an iid signal."""
        if self.kind is SignalKind.IID:
            return np.tile(self.marginal, (self.marginal.size, 1))
        return self.transition

    def to_dict(self) -> dict:
        """Model file representation."""
        if self.kind is SignalKind.IID:
            return {"kind": "iid", "marginal": self.marginal.tolist()}
        return {"kind": "markov", "transition": self.transition.tolist()}


@dataclass(frozen=True, eq=False)
class ErasureProcess:
    """Law of the hidden erasure process over {pass, erased}.

    Attributes:
        kind (ErasureKind): iid or markov
        pi (float): erasure probability (iid only)
        transition (np.ndarray): 2x2 matrix over (pass, erased) (markov only)
        initial (np.ndarray): stationary law of `transition` (markov only)
    """

    kind: ErasureKind
    pi: Optional[float] = None
    transition: Optional[np.ndarray] = None
    initial: Optional[np.ndarray] = None

    @property
    def erasure_probability(self) -> float:
        """Stationary probability that a position is erased."""
        if self.kind is ErasureKind.IID:
            return self.pi
        return float(self.initial[ERASED])

    def to_dict(self) -> dict:
        """Model file representation."""
        if self.kind is ErasureKind.IID:
            return {"kind": "iid", "pi": self.pi}
        return {"kind": "markov", "transition": self.transition.tolist()}


@dataclass(frozen=True, eq=False)
class ChannelModel:
    """Law of Z given X.

    Attributes:
        kind (ChannelKind): dmc, erasure_known or erasure_unknown
        matrix (np.ndarray): W(z|x) with shape (|X|, |Z|) (dmc only)
        erasure (ErasureProcess): hidden erasure law (erasure_known only)
        erasure_glyph (str): erasure symbol (erasure modes only)
    """

    kind: ChannelKind
    matrix: Optional[np.ndarray] = None
    erasure: Optional[ErasureProcess] = None
    erasure_glyph: Optional[str] = None

    @property
    def is_erasure(self) -> bool:
        """True for both erasure modes."""
        return self.kind is not ChannelKind.DMC

    def to_dict(self) -> dict:
        """Model file representation."""
        if self.kind is ChannelKind.DMC:
            return {"kind": "dmc", "matrix": self.matrix.tolist()}
        out = {"kind": self.kind.value, "erasure_glyph": self.erasure_glyph}
        if self.kind is ChannelKind.ERASURE_KNOWN:
            out["erasure"] = self.erasure.to_dict()
        return out


@dataclass(frozen=True, eq=False)
class ModelSpec:
    """The known probability law of (X, Z).

    Attributes:
        signal (SignalModel): law of X
        channel (ChannelModel): law of Z given X
        input_alphabet (Alphabet): alphabet of X
        output_alphabet (Alphabet): alphabet of Z; X followed by the erasure glyph in erasure modes
    """

    signal: SignalModel
    channel: ChannelModel
    input_alphabet: Alphabet
    output_alphabet: Alphabet

    @property
    def erasure_index(self) -> Optional[int]:
        """Index of the erasure glyph in the output alphabet, None for a dmc."""
        if not self.channel.is_erasure:
            return None
        return self.output_alphabet.index(self.channel.erasure_glyph)

    @property
    def is_memoryless(self) -> bool:
        """True for an iid signal through a channel acting independently per position."""
        if self.signal.kind is not SignalKind.IID:
            return False
        if self.channel.kind is ChannelKind.ERASURE_KNOWN:
            return self.channel.erasure.kind is ErasureKind.IID
        return True

    def with_surrogate(self, pi: float) -> "ModelSpec":
        """Returns the erasure_known model with iid erasure probability pi.

        Used to simulate an erasure_unknown model, whose true erasure law is not available.
        """
        if not self.channel.is_erasure:
            raise UsageError("A surrogate erasure probability only applies to erasure channels")
        erasure = _validate_erasure({"kind": "iid", "pi": pi}, "surrogate")
        channel = replace(self.channel, kind=ChannelKind.ERASURE_KNOWN, erasure=erasure)
        return replace(self, channel=channel)

    def to_dict(self) -> dict:
        """Model file representation (inverse of `validate_model`)."""
        out = {
            "alphabet": list(self.input_alphabet.symbols),
            "signal": self.signal.to_dict(),
            "channel": self.channel.to_dict(),
        }
        if self.channel.kind is ChannelKind.DMC and self.output_alphabet != self.input_alphabet:
            out["output_alphabet"] = list(self.output_alphabet.symbols)
        return out


@dataclass(frozen=True, eq=False)
class Trellis:
    """Per-step log2 weights of a fixed observation.

    `log_weights[i, a, b]` is log2 of P_sig(x_i = b | x_{i-1} = a) times the channel weight of z_i
    given x_i = b. At position 0 the predecessor axis is unused: every row holds the initial law
    times the channel weight. -inf encodes a forbidden step.

    Attributes:
        states (Alphabet): signal alphabet
        outputs (Alphabet): observation alphabet
        observation (tuple[int, ...]): the compiled observation (output indices)
        log_weights (np.ndarray): array of shape (t, |X|, |X|)
        normalized (bool): False for erasure_unknown, whose weights are only proportional to P(x, z)
    """

    states: Alphabet
    outputs: Alphabet
    observation: tuple[int, ...]
    log_weights: np.ndarray = field(repr=False)
    normalized: bool = True

    @property
    def t(self) -> int:
        """Sequence length."""
        return len(self.observation)

    @property
    def num_states(self) -> int:
        """Size of the signal alphabet."""
        return self.states.size

    @property
    def observation_text(self) -> str:
        """The observation as a glyph string."""
        return self.outputs.format(self.observation)


def _probability_vector(values: Any, name: str, size: Optional[int] = None) -> np.ndarray:  # noqa: ANN401
    try:
        vector = np.array(values, dtype=float)
    except (TypeError, ValueError):
        raise ModelValidationError(f"{name} must be a list of numbers") from None
    if vector.ndim != 1 or vector.size == 0:
        raise ModelValidationError(f"{name} must be a non-empty list of numbers")
    if size is not None and vector.size != size:
        raise ModelValidationError(f"{name} has {vector.size} entries, expected {size}")
    if not np.all(np.isfinite(vector)) or np.any(vector < 0.0) or np.any(vector > 1.0):
        raise ModelValidationError(f"{name} entries must lie in [0, 1]")
    total = vector.sum()
    if abs(total - 1.0) > ROW_TOLERANCE:
        raise ModelValidationError(f"{name} sums to {total:.15g}, not 1")
    return vector


def _stochastic_matrix(values: Any, name: str, rows: int, cols: int) -> np.ndarray:  # noqa: ANN401
    try:
        matrix = np.array(values, dtype=float)
    except (TypeError, ValueError):
        raise ModelValidationError(f"{name} must be a matrix of numbers") from None
    if matrix.shape != (rows, cols):
        raise ModelValidationError(f"{name} has shape {matrix.shape}, expected ({rows}, {cols})")
    for r in range(rows):
        _probability_vector(matrix[r], f"{name} row {r}")
    return matrix


def _is_primitive(transition: np.ndarray) -> bool:
    """A stochastic matrix is ergodic (irreducible and aperiodic) iff some power is strictly positive.

    Wielandt's bound (n - 1)^2 + 1 limits the power that has to be checked.
    """
    n = transition.shape[0]
    support = transition > 0.0
    power = support.copy()
    exponent = 1
    target = (n - 1) ** 2 + 1
    while exponent < target:
        power = (power.astype(np.int64) @ support.astype(np.int64)) > 0
        exponent += 1
        if power.all():
            return True
    return bool(power.all())


def stationary_distribution(transition: Any) -> np.ndarray:  # noqa: ANN401
    """Returns the stationary law of an ergodic transition matrix.

    Args:
        transition: square row-stochastic matrix

    Returns:
        (np.ndarray): pi with pi P = pi, entries >= 0 and summing to 1

    Raises:
        (ModelValidationError): the matrix is not square or not ergodic, or the solution does not converge
    """
    matrix = np.array(transition, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ModelValidationError(f"Transition matrix must be square, got shape {matrix.shape}")
    if not _is_primitive(matrix):
        raise ModelValidationError("Transition matrix is non-ergodic (reducible or periodic)")

    n = matrix.shape[0]
    system = matrix.T - np.eye(n)
    system[-1, :] = 1.0
    rhs = np.zeros(n)
    rhs[-1] = 1.0
    pi = np.linalg.solve(system, rhs)

    # Polish with power iteration; the chain is primitive so this converges.
    for _ in range(1000):
        pi = np.clip(pi, 0.0, None)
        pi = pi / pi.sum()
        nxt = pi @ matrix
        nxt = nxt / nxt.sum()
        residual = np.max(np.abs(nxt - pi))
        pi = nxt
        if residual <= STATIONARY_RESIDUAL / 4:
            break
    if np.max(np.abs(pi @ matrix - pi)) > STATIONARY_RESIDUAL:
        raise ModelValidationError("Stationary distribution did not converge")
    return pi


def _validate_signal(raw: Mapping, size: int) -> SignalModel:
    if not isinstance(raw, Mapping) or "kind" not in raw:
        raise ModelValidationError("signal must be an object with a 'kind'")
    try:
        kind = SignalKind(raw["kind"])
    except ValueError:
        raise ModelValidationError(f"Unknown signal kind {raw['kind']!r}") from None

    if kind is SignalKind.IID:
        if "transition" in raw:
            raise ModelValidationError("iid signal takes 'marginal', not 'transition'")
        marginal = _probability_vector(raw.get("marginal"), "signal.marginal", size)
        return SignalModel(kind, marginal=_frozen(marginal))

    if "marginal" in raw:
        raise ModelValidationError("markov signal takes 'transition', not 'marginal'")
    transition = _stochastic_matrix(raw.get("transition"), "signal.transition", size, size)
    stationary = stationary_distribution(transition)
    if raw.get("initial") is not None:
        initial = _probability_vector(raw["initial"], "signal.initial", size)
        gap = float(np.max(np.abs(initial - stationary)))
        if gap > STATIONARY_TOLERANCE:
            raise ModelValidationError(f"signal.initial differs from the stationary distribution by {gap:.3g}")
    return SignalModel(kind, transition=_frozen(transition), initial=_frozen(stationary))


def _validate_erasure(raw: Mapping, name: str) -> ErasureProcess:
    if not isinstance(raw, Mapping) or "kind" not in raw:
        raise ModelValidationError(f"{name} must be an object with a 'kind'")
    try:
        kind = ErasureKind(raw["kind"])
    except ValueError:
        raise ModelValidationError(f"Unknown erasure kind {raw['kind']!r}") from None

    if kind is ErasureKind.IID:
        try:
            pi = float(raw.get("pi"))
        except (TypeError, ValueError):
            raise ModelValidationError(f"{name}.pi must be a number") from None
        if not 0.0 < pi < 1.0:
            raise ModelValidationError(f"{name}.pi = {pi} must lie strictly between 0 and 1")
        return ErasureProcess(kind, pi=pi)

    transition = _stochastic_matrix(raw.get("transition"), f"{name}.transition", 2, 2)
    stationary = stationary_distribution(transition)
    if raw.get("initial") is not None:
        initial = _probability_vector(raw["initial"], f"{name}.initial", 2)
        if float(np.max(np.abs(initial - stationary))) > STATIONARY_TOLERANCE:
            raise ModelValidationError(f"{name}.initial differs from the stationary distribution")
    return ErasureProcess(kind, transition=_frozen(transition), initial=_frozen(stationary))


def validate_model(raw: Mapping) -> ModelSpec:
    """Validates a model candidate and returns an immutable ModelSpec.

    Args:
        raw: mapping with keys `alphabet`, `signal`, `channel` and, for a dmc, optionally
            `output_alphabet` (see the model file format)

    Returns:
        (ModelSpec): the validated model; a markov initial law is replaced by the computed
            stationary distribution

    Raises:
        (ModelValidationError): any invariant violation
    """
    if not isinstance(raw, Mapping):
        raise ModelValidationError("Model must be an object")
    for key in ("alphabet", "signal", "channel"):
        if key not in raw:
            raise ModelValidationError(f"Model is missing '{key}'")
    if not isinstance(raw["alphabet"], (list, tuple)):
        raise ModelValidationError("alphabet must be a list of glyph strings")

    input_alphabet = Alphabet(tuple(raw["alphabet"]))
    signal = _validate_signal(raw["signal"], input_alphabet.size)

    channel_raw = raw["channel"]
    if not isinstance(channel_raw, Mapping) or "kind" not in channel_raw:
        raise ModelValidationError("channel must be an object with a 'kind'")
    try:
        kind = ChannelKind(channel_raw["kind"])
    except ValueError:
        raise ModelValidationError(f"Unknown channel kind {channel_raw['kind']!r}") from None

    if kind is ChannelKind.DMC:
        output_alphabet = Alphabet(tuple(raw.get("output_alphabet", raw["alphabet"])))
        matrix = _stochastic_matrix(
            channel_raw.get("matrix"), "channel.matrix", input_alphabet.size, output_alphabet.size
        )
        channel = ChannelModel(kind, matrix=_frozen(matrix))
    else:
        glyph = channel_raw.get("erasure_glyph", DEFAULT_ERASURE_GLYPH)
        if glyph in input_alphabet.symbols:
            raise ModelValidationError(f"Erasure glyph {glyph!r} must not belong to the signal alphabet")
        output_alphabet = Alphabet(input_alphabet.symbols + (glyph,))
        if "output_alphabet" in raw and tuple(raw["output_alphabet"]) != output_alphabet.symbols:
            raise ModelValidationError(f"Erasure channels force output_alphabet = {list(output_alphabet.symbols)}")
        if "matrix" in channel_raw:
            raise ModelValidationError("Erasure channels take no 'matrix'")
        if kind is ChannelKind.ERASURE_KNOWN:
            if "erasure" not in channel_raw:
                raise ModelValidationError("erasure_known channel needs an 'erasure' process")
            erasure = _validate_erasure(channel_raw["erasure"], "channel.erasure")
            channel = ChannelModel(kind, erasure=erasure, erasure_glyph=glyph)
        else:
            if "erasure" in channel_raw or "pi" in channel_raw:
                raise ModelValidationError("erasure_unknown channel carries no numeric parameters")
            channel = ChannelModel(kind, erasure_glyph=glyph)

    model = ModelSpec(signal, channel, input_alphabet, output_alphabet)
    logger.debug(
        "Validated model: %s signal over %d symbols, %s channel", signal.kind.value, input_alphabet.size, kind.value
    )
    return model


def _cumulative(probs: np.ndarray) -> np.ndarray:
    """Row-wise cumulative law with the last column exactly 1, so draws in [0, 1) never land past it."""
    cum = np.cumsum(probs, axis=-1)
    return cum / cum[..., -1:]


def _sample_chain(initial: np.ndarray, transition: np.ndarray, uniforms: np.ndarray) -> np.ndarray:
    cum_initial = _cumulative(initial)
    cum_rows = _cumulative(transition)
    out = np.empty(uniforms.size, dtype=np.int64)
    state = int(np.searchsorted(cum_initial, uniforms[0], side="right"))
    out[0] = state
    for i in range(1, uniforms.size):
        state = int(np.searchsorted(cum_rows[state], uniforms[i], side="right"))
        out[i] = state
    return out


def sample_path(
    model: ModelSpec, t: int, seed: SeedLike, surrogate_pi: Optional[float] = None
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Draws (x, z) of length t from the joint law.

    Args:
        model: the model
        t: sequence length, at least 1
        seed: integer seed (a Philox generator is derived from it) or a Generator
        surrogate_pi: erasure probability used to simulate an erasure_unknown channel

    Returns:
        (tuple): x as signal indices and z as output indices

    Raises:
        (UsageError): erasure_unknown without a surrogate
        (ModelValidationError): surrogate outside (0, 1)
    """
    if t < 1:
        raise ValueError(f"Path length must be at least 1, got {t}")
    if model.channel.kind is ChannelKind.ERASURE_UNKNOWN:
        if surrogate_pi is None:
            raise UsageError("Simulating an erasure_unknown channel needs a surrogate erasure probability")
        model = model.with_surrogate(surrogate_pi)

    rng = generator(seed)
    signal = model.signal
    if signal.kind is SignalKind.IID:
        x = rng.choice(signal.marginal.size, size=t, p=signal.marginal)
    else:
        x = _sample_chain(signal.initial, signal.transition, rng.random(t))

    channel = model.channel
    if channel.kind is ChannelKind.DMC:
        cum = _cumulative(channel.matrix)[x]
        z = (cum <= rng.random(t)[:, None]).sum(axis=1)
    else:
        erasure = channel.erasure
        if erasure.kind is ErasureKind.IID:
            erased = rng.random(t) < erasure.pi
        else:
            erased = _sample_chain(erasure.initial, erasure.transition, rng.random(t)) == ERASED
        z = np.where(erased, model.erasure_index, x)
    return tuple(int(v) for v in x), tuple(int(v) for v in z)


def _channel_weights(model: ModelSpec, z: tuple[int, ...]) -> np.ndarray:
    """Linear-domain channel weight of z_i for every signal symbol, shape (t, |X|)."""
    size = model.input_alphabet.size
    channel = model.channel
    if channel.kind is ChannelKind.DMC:
        return channel.matrix[:, list(z)].T

    erasure_index = model.erasure_index
    erased = np.array([s == erasure_index for s in z])
    observed = np.zeros((len(z), size))
    for i, s in enumerate(z):
        if not erased[i]:
            observed[i, s] = 1.0
    weights = np.where(erased[:, None], 1.0, observed)
    if channel.kind is ChannelKind.ERASURE_UNKNOWN:
        return weights

    process = channel.erasure
    if process.kind is ErasureKind.IID:
        factor = np.where(erased, process.pi, 1.0 - process.pi)
    else:
        theta = erased.astype(np.int64)
        factor = np.empty(len(z))
        factor[0] = process.initial[theta[0]]
        factor[1:] = process.transition[theta[:-1], theta[1:]]
    return weights * factor[:, None]


def compile_trellis(model: ModelSpec, z: Sequence[int]) -> Trellis:
    """Compiles an observation into trellis log-weights.

    For dmc and erasure_known channels the path weight product equals P(x, z). For erasure_unknown
    the channel weight is 1 at erased positions and the indicator 1{x_i = z_i} elsewhere, so path
    weights are proportional to P(x | z) with a constant that does not depend on x.

    Args:
        model: the model
        z: observation as output indices

    Returns:
        (Trellis): the compiled trellis
    """
    z = tuple(int(s) for s in z)
    if len(z) == 0:
        raise ValueError("Observation must contain at least one symbol")
    if any(s < 0 or s >= model.output_alphabet.size for s in z):
        raise ValueError(f"Observation contains symbols outside the output alphabet: {z}")

    with np.errstate(divide="ignore"):
        log_initial = np.log2(model.signal.initial_distribution)
        log_transition = np.log2(model.signal.transition_matrix)
        log_channel = np.log2(_channel_weights(model, z))

    size = model.input_alphabet.size
    log_weights = np.empty((len(z), size, size))
    log_weights[0] = log_initial[None, :] + log_channel[0][None, :]
    log_weights[1:] = log_transition[None, :, :] + log_channel[1:, None, :]
    log_weights.flags.writeable = False
    return Trellis(
        states=model.input_alphabet,
        outputs=model.output_alphabet,
        observation=z,
        log_weights=log_weights,
        normalized=model.channel.kind is not ChannelKind.ERASURE_UNKNOWN,
    )


def joint_log_prob(trellis: Trellis, x: Sequence[int]) -> float:
    """Returns the path log2-weight of x, accumulated in position order.

    Raises:
        (ValueError): x does not have the trellis length
    """
    if len(x) != trellis.t:
        raise ValueError(f"Sequence length {len(x)} does not match observation length {trellis.t}")
    lw = trellis.log_weights
    total = float(lw[0, 0, x[0]])
    for i in range(1, trellis.t):
        total += float(lw[i, x[i - 1], x[i]])
    return total
