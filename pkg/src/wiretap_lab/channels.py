"""Classical channel models: BSCs, discrete memoryless channels and the
broadcast triple used for Alice/Bob/Eve."""
import json
from dataclasses import dataclass

import numpy as np

from . import _rng
from ._validation import DIST_ATOL, check_dist, check_prob
from .errors import ValidationError
from .info import _entropy_unchecked, cascade


@dataclass(frozen=True)
class Bsc:
    crossover: float

    def __post_init__(self):
        object.__setattr__(self, "crossover", check_prob(self.crossover, "crossover"))

    @property
    def matrix(self):
        e = self.crossover
        return np.array([[1 - e, e], [e, 1 - e]])


@dataclass(frozen=True, eq=False)
class Dmc:
    """Row-stochastic transition table ``P(y|x)``."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.ndim != 2 or m.size == 0:
            raise ValidationError("DMC matrix must be a non-empty 2-d table")
        if np.any(m < 0):
            raise ValidationError("DMC matrix has negative entries")
        if np.any(np.abs(m.sum(axis=1) - 1.0) > DIST_ATOL):
            raise ValidationError("every DMC row must sum to 1")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def inputs(self):
        return self.matrix.shape[0]

    @property
    def outputs(self):
        return self.matrix.shape[1]

    def joint(self, prior):
        prior = check_dist(prior, "input distribution")
        if prior.size != self.inputs:
            raise ValidationError("prior length does not match the input alphabet")
        return prior[:, None] * self.matrix

    def to_json(self):
        return json.dumps({"inputs": self.inputs, "outputs": self.outputs,
                           "rows": self.matrix.tolist()})

    @classmethod
    def from_json(cls, text):
        doc = json.loads(text) if isinstance(text, str) else text
        rows = np.asarray(doc["rows"], dtype=float)
        if rows.shape != (doc["inputs"], doc["outputs"]):
            raise ValidationError(
                f"rows have shape {rows.shape}, header says "
                f"({doc['inputs']}, {doc['outputs']})")
        return cls(rows)


@dataclass(frozen=True)
class BroadcastModel:
    """Alice's bit reaches Bob through ``main`` and Eve through ``eve``.

    ``conceptual_delta`` is the extra BSC stage appended to Eve's view when
    forming the forward conceptual channel.
    """

    main: Bsc
    eve: Bsc
    conceptual_delta: float = 0.0

    def __post_init__(self):
        check_prob(self.conceptual_delta, "conceptual_delta")

    @classmethod
    def from_crossovers(cls, main, eve, conceptual_delta=0.0):
        return cls(Bsc(main), Bsc(eve), conceptual_delta)

    def eve_superior(self):
        """Whether Eve's channel is strictly less noisy than the main channel."""
        return self.eve.crossover < self.main.crossover


def transmit(channel, word, seed, stream=0):
    """Send ``word`` through ``channel``; each bit flips independently."""
    bits = np.asarray(word, dtype=np.uint8)
    if bits.size == 0:
        raise ValidationError("word must be non-empty")
    flips = _rng.bernoulli_bits(channel.crossover, bits.size, seed, stream)
    return bits.ravel() ^ flips


def compose(a, b):
    return Bsc(cascade(a.crossover, b.crossover))


def forward_conceptual(model):
    """Eve's effective channel after the conceptual cascade stage."""
    return compose(model.eve, Bsc(model.conceptual_delta))


def backward_conceptual(eA, eB, eE):
    """Pairwise cascades (Alice-Eve, Bob-Eve, Alice-Bob) of the backward channel."""
    return {"alice_eve": cascade(eA, eE), "bob_eve": cascade(eB, eE),
            "alice_bob": cascade(eA, eB)}


def joint_xyz(model, prior):
    """Joint law ``P(x) P_main(y|x) P_eve(z|x)`` as a 2x2x2 array."""
    prior = check_dist(prior, "input distribution")
    if prior.size != 2:
        raise ValidationError("broadcast input must be binary")
    return prior[:, None, None] * model.main.matrix[:, :, None] * model.eve.matrix[:, None, :]


def conditional_mi_given_z(model, prior):
    """I(X;Y|Z) = H(X,Z) + H(Y,Z) - H(Z) - H(X,Y,Z)."""
    p = joint_xyz(model, prior)
    value = (_entropy_unchecked(p.sum(axis=1)) + _entropy_unchecked(p.sum(axis=0))
             - _entropy_unchecked(p.sum(axis=(0, 1))) - _entropy_unchecked(p))
    return max(0.0, value)


def conditional_mi_given_z_grid(model, p1):
    """Vectorised I(X;Y|Z) for binary priors ``(1 - p1, p1)``."""
    p1 = np.asarray(p1, dtype=float)
    prior = np.stack([1.0 - p1, p1], axis=-1)
    p = (prior[..., :, None, None] * model.main.matrix[:, :, None]
         * model.eve.matrix[:, None, :])

    def h(t):
        t = t.reshape(p1.shape + (-1,))
        safe = np.where(t > 0, t, 1.0)
        return -(t * np.log2(safe)).sum(axis=-1)

    lead = p1.ndim
    hxz = h(p.sum(axis=lead + 1))
    hyz = h(p.sum(axis=lead))
    hz = h(p.sum(axis=(lead, lead + 1)))
    hxyz = h(p)
    return np.maximum(0.0, hxz + hyz - hz - hxyz)
