"""Ensembles, Holevo information and the Bob-minus-Eve secrecy rate."""
import itertools
import json
from dataclasses import dataclass

import numpy as np

from ._optimize import maximize_binary_prior
from ._validation import check_dist
from .errors import DimensionError, ValidationError
from .qstate import DensityMatrix, KrausChannel, apply_channel, entropy_of_eigenvalues, von_neumann_entropy

SIMPLEX_STEP = 0.01


@dataclass(frozen=True)
class Ensemble:
    priors: np.ndarray
    states: tuple

    def __post_init__(self):
        priors = check_dist(self.priors, "priors")
        states = tuple(self.states)
        if len(states) != priors.size:
            raise ValidationError(f"{priors.size} priors but {len(states)} states")
        if not all(isinstance(s, DensityMatrix) for s in states):
            raise ValidationError("ensemble members must be DensityMatrix instances")
        if len({s.dim for s in states}) != 1:
            raise DimensionError("ensemble states must share one dimension")
        object.__setattr__(self, "priors", priors)
        object.__setattr__(self, "states", states)

    @classmethod
    def uniform(cls, states):
        states = list(states)
        return cls(np.full(len(states), 1.0 / len(states)), states)

    def average(self):
        return sum(p * s.entries for p, s in zip(self.priors, self.states))


def holevo_chi(ensemble):
    """``S(sum p_x rho_x) - sum p_x S(rho_x)`` in bits."""
    avg = entropy_of_eigenvalues(np.linalg.eigvalsh(ensemble.average()))
    mean = sum(p * von_neumann_entropy(s) for p, s in zip(ensemble.priors, ensemble.states) if p > 0)
    return max(0.0, avg - mean)


class CqChannel:
    """Classical-quantum channel: each input letter maps to a density matrix."""

    def __init__(self, states):
        if isinstance(states, dict):
            inputs, mats = list(states), list(states.values())
        else:
            mats = list(states)
            inputs = list(range(len(mats)))
        mats = [m if isinstance(m, DensityMatrix) else DensityMatrix(m) for m in mats]
        if not mats:
            raise ValidationError("a cq channel needs at least one input letter")
        if len({m.dim for m in mats}) != 1:
            raise DimensionError("all output states must share one dimension")
        self.inputs = tuple(inputs)
        self.states = tuple(mats)

    @property
    def dim(self):
        return self.states[0].dim

    def __len__(self):
        return len(self.states)

    def state_for(self, x):
        return self.states[self.inputs.index(x)]

    def ensemble(self, prior):
        return Ensemble(prior, self.states)

    def degrade(self, channel):
        """Cq channel whose outputs are ``channel`` applied to these outputs."""
        if channel.dim_in != self.dim:
            raise DimensionError(f"degrading map expects dim {channel.dim_in}, channel has {self.dim}")
        return CqChannel(dict(zip(self.inputs, (apply_channel(channel, s) for s in self.states))))

    def to_dict(self):
        return {"inputs": list(self.inputs), "dim": self.dim,
                "states": {str(x): s.to_dict() for x, s in zip(self.inputs, self.states)}}

    @classmethod
    def from_dict(cls, doc):
        states = {}
        for x in doc["inputs"]:
            s = DensityMatrix.from_dict(doc["states"][str(x)])
            if s.dim != doc["dim"]:
                raise DimensionError(f"state for {x!r} has dim {s.dim}, header says {doc['dim']}")
            states[x] = s
        return cls(states)

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def _chi_batch(mats, entropies, priors):
    """Holevo quantity for many priors at once; ``priors`` has shape (n, |X|)."""
    avg = np.einsum("nx,xij->nij", priors, mats)
    lam = np.clip(np.linalg.eigvalsh(avg), 0.0, None)
    safe = np.where(lam > 1e-12, lam, 1.0)
    s_avg = -(np.where(lam > 1e-12, lam, 0.0) * np.log2(safe)).sum(axis=1)
    return np.maximum(0.0, s_avg - priors @ entropies)


def _rate_batch(bob, eve, priors):
    mb = np.stack([s.entries for s in bob.states])
    me = np.stack([s.entries for s in eve.states])
    sb = np.array([von_neumann_entropy(s) for s in bob.states])
    se = np.array([von_neumann_entropy(s) for s in eve.states])
    priors = np.atleast_2d(priors)
    return _chi_batch(mb, sb, priors) - _chi_batch(me, se, priors)


def _check_eve_map(bob, eve_map):
    if not isinstance(eve_map, KrausChannel):
        raise ValidationError("Eve's view must be a CPTP image of Bob's states (pass a KrausChannel)")
    if eve_map.dim_in != bob.dim:
        raise DimensionError(f"Eve's map expects dim {eve_map.dim_in}, Bob's states have dim {bob.dim}")


def secrecy_rate(bob, eve_map, prior):
    """``chi_B - chi_E`` for a given prior; may be negative."""
    _check_eve_map(bob, eve_map)
    prior = check_dist(prior, "prior")
    eve = bob.degrade(eve_map)
    return holevo_chi(bob.ensemble(prior)) - holevo_chi(eve.ensemble(prior))


def _simplex_grid(k, step):
    n = int(round(1.0 / step))
    pts = [c + (n - sum(c),) for c in itertools.product(range(n + 1), repeat=k - 1) if sum(c) <= n]
    return np.array(pts, dtype=float) / n


def optimize_secrecy_rate(bob, eve_map, step=None):
    """Best ``chi_B - chi_E`` over input priors.

    Binary alphabets use a 1e-3 grid refined by golden section. Larger
    alphabets use a fixed simplex grid (step 0.01): an approximation of the
    supremum, not the supremum itself. Returns ``(value, prior)``.
    """
    _check_eve_map(bob, eve_map)
    eve = bob.degrade(eve_map)
    k = len(bob)
    if k == 1:
        return 0.0, np.array([1.0])
    if k == 2:
        grid = np.linspace(0.0, 1.0, 1001)
        values = _rate_batch(bob, eve, np.stack([1.0 - grid, grid], axis=1))
        p1, value = maximize_binary_prior(
            lambda x: float(_rate_batch(bob, eve, [[1.0 - x, x]])[0]), grid_values=values)
        return value, np.array([1.0 - p1, p1])
    pts = _simplex_grid(k, SIMPLEX_STEP if step is None else step)
    # lexicographically smallest prior wins ties
    pts = pts[np.lexsort(pts.T[::-1])]
    values = _rate_batch(bob, eve, pts)
    i = int(np.argmax(values))
    return float(values[i]), pts[i]
