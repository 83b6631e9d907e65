"""XOR games: biases of quantum strategies, classical optimum by enumeration,
and three-player tensor biases."""
import itertools
import json
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError, ValidationError

MAX_CLASSICAL_QUESTIONS = 24
_PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]])
_PAULI_Z = np.diag([1.0, -1.0])


@dataclass(frozen=True, eq=False)
class XorGame:
    """Signed game table ``G[s, t] = V(s, t) pi(s, t)`` with ``sum |G| = 1``."""

    matrix: np.ndarray

    def __post_init__(self):
        g = np.array(self.matrix, dtype=float)
        if g.ndim < 2 or g.size == 0:
            raise ValidationError("game table needs at least two question axes")
        if abs(np.abs(g).sum() - 1.0) > 1e-12:
            raise ValidationError(f"sum of |G| is {np.abs(g).sum()!r}, expected 1")
        g.setflags(write=False)
        object.__setattr__(self, "matrix", g)

    @property
    def players(self):
        return self.matrix.ndim

    @classmethod
    def from_rule(cls, predicate_signs, probabilities):
        return cls(np.asarray(predicate_signs, dtype=float) * np.asarray(probabilities, dtype=float))

    @classmethod
    def chsh(cls):
        return cls(np.array([[1.0, 1.0], [1.0, -1.0]]) / 4.0)

    def to_json(self):
        if self.players != 2:
            raise ValidationError("JSON game tables are two-player")
        return json.dumps({"s": self.matrix.shape[0], "t": self.matrix.shape[1],
                           "entries": self.matrix.tolist()})

    @classmethod
    def from_json(cls, text):
        doc = json.loads(text) if isinstance(text, str) else text
        g = np.asarray(doc["entries"], dtype=float)
        if g.shape != (doc["s"], doc["t"]):
            raise ValidationError(f"entries have shape {g.shape}, header says ({doc['s']}, {doc['t']})")
        return cls(g)


def _check_observable(a):
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError("observables must be square matrices")
    if np.max(np.abs(a - a.conj().T)) > 1e-10:
        raise ValidationError("observable is not Hermitian")
    if np.max(np.abs(a @ a - np.eye(len(a)))) > 1e-10:
        raise ValidationError("observable must square to the identity (eigenvalues +-1)")
    return a


@dataclass(frozen=True, eq=False)
class QuantumStrategy:
    """Shared pure state plus one list of +-1 observables per player."""

    state: np.ndarray
    observables: tuple

    def __post_init__(self):
        psi = np.asarray(self.state, dtype=complex).ravel()
        if abs(np.linalg.norm(psi) - 1.0) > 1e-12:
            raise ValidationError("strategy state must have unit norm")
        obs = tuple(tuple(_check_observable(a) for a in player) for player in self.observables)
        dims = []
        for player in obs:
            if not player or len({a.shape[0] for a in player}) != 1:
                raise DimensionError("each player needs observables of one dimension")
            dims.append(player[0].shape[0])
        if int(np.prod(dims)) != psi.size:
            raise DimensionError(f"state has dim {psi.size}, observables give {int(np.prod(dims))}")
        object.__setattr__(self, "state", psi)
        object.__setattr__(self, "observables", obs)

    @property
    def dims(self):
        return tuple(p[0].shape[0] for p in self.observables)

    @classmethod
    def two_player(cls, state, observables_a, observables_b):
        return cls(state, (tuple(observables_a), tuple(observables_b)))

    def correlator(self, questions):
        psi = self.state.reshape(self.dims)
        out = psi
        for axis, (player, q) in enumerate(zip(self.observables, questions)):
            out = np.moveaxis(np.tensordot(player[q], out, axes=([1], [axis])), 0, axis)
        return float(np.vdot(psi, out).real)


def _bias(table, strategy):
    if table.ndim != len(strategy.observables):
        raise DimensionError(f"game has {table.ndim} players, strategy has {len(strategy.observables)}")
    if table.shape != tuple(len(p) for p in strategy.observables):
        raise DimensionError(f"game questions {table.shape} do not match strategy observables")
    return float(sum(g * strategy.correlator(q) for q, g in np.ndenumerate(table) if g != 0))


def bias(game, strategy):
    """``sum_st G_st <psi| A_s (x) B_t |psi>``."""
    return _bias(game.matrix, strategy)


def multiplayer_bias(game, strategy):
    """Tensor bias for any number of players (three in the Alice/Bob/Cleo setting)."""
    table = game.matrix if isinstance(game, XorGame) else np.asarray(game, dtype=float)
    return _bias(table, strategy)


def win_probability(beta):
    if not -1.0 <= beta <= 1.0:
        raise DomainError(f"bias {beta!r} must lie in [-1, 1]")
    return (beta + 1.0) / 2.0


def classical_optimum(game):
    """Best deterministic +-1 strategy, by enumerating Alice's answers and
    letting Bob answer each question optimally."""
    g = game.matrix
    if g.ndim != 2:
        raise ValidationError("classical_optimum handles two-player games")
    s, t = g.shape
    if s + t > MAX_CLASSICAL_QUESTIONS:
        raise DomainError(f"{s}+{t} questions exceed the enumeration bound {MAX_CLASSICAL_QUESTIONS}")
    best = -np.inf
    for a in itertools.product((1.0, -1.0), repeat=s):
        # for fixed a, optimal b_t = sign of column sum
        best = max(best, float(np.abs(np.asarray(a) @ g).sum()))
    return best


def epsilon_optimality_check(game, strategy, beta_star, eps, upper_tol=1e-9):
    """Whether ``(1 - eps) beta_star <= bias <= beta_star`` (upper side with tolerance)."""
    if not beta_star > 0:
        raise DomainError("beta_star must be positive")
    b = bias(game, strategy)
    return bool((1.0 - eps) * beta_star <= b <= beta_star + upper_tol)


def plane_observable(angle):
    """``cos(angle) Z + sin(angle) X``: a +-1 observable in the X-Z plane."""
    return np.cos(angle) * _PAULI_Z + np.sin(angle) * _PAULI_X


def tsirelson_strategy():
    """Singlet state with Alice at angles 0, pi/2 and Bob at 5pi/4, 3pi/4.

    The singlet gives ``<A(a) B(b)> = -cos(a - b)``, so Bob's settings are the
    +-pi/4 measurements rotated by pi to absorb the sign.
    """
    singlet = np.array([0.0, 1.0, -1.0, 0.0]) / np.sqrt(2.0)
    a = (plane_observable(0.0), plane_observable(np.pi / 2))
    b = (plane_observable(5 * np.pi / 4), plane_observable(3 * np.pi / 4))
    return QuantumStrategy.two_player(singlet, a, b)


def trivial_strategy(players=2):
    """Every player answers +1 on a product state."""
    obs = tuple((np.eye(2), np.eye(2)) for _ in range(players))
    psi = np.zeros(2 ** players)
    psi[0] = 1.0
    return QuantumStrategy(psi, obs)


def ghz_state(players=3):
    psi = np.zeros(2 ** players)
    psi[0] = psi[-1] = 1.0 / np.sqrt(2.0)
    return psi


def ghz_strategy(rng, players=3):
    """GHZ state with each player measuring at seeded random X-Z plane angles."""
    angles = rng.uniform(0, 2 * np.pi, size=(players, 2))
    obs = tuple(tuple(plane_observable(t) for t in row) for row in angles)
    return QuantumStrategy(ghz_state(players), obs)


def random_game(shape, rng):
    g = rng.normal(size=shape)
    return XorGame(g / np.abs(g).sum())
