"""Classical-quantum polar transform on binary-input cq channels.

Output states are stored block-diagonally: one block per value of the
classical registers that the ``+`` transform exposes. Each block is kept as a
factor ``F`` with ``block = F F^dagger``, so pure and low-rank outputs stay
cheap: entropies come from the smaller of ``F^dagger F`` and ``F F^dagger``.
The representation is exact.
"""
import csv
import io
from dataclasses import dataclass

import numpy as np

from .errors import CapabilityError, DimensionError, DomainError, ValidationError
from .holevo import CqChannel
from .qstate import DensityMatrix, KrausChannel

MAX_DEPTH = 3
_ZERO = 1e-12
_SQRT_HALF = np.sqrt(0.5)


def _factorize(blocks):
    """Factor PSD blocks ``(n, d, d)`` as ``(n, d, r)`` with ``r <= d``."""
    w, v = np.linalg.eigh((blocks + np.conj(np.swapaxes(blocks, 1, 2))) / 2.0)
    w = np.clip(w, 0.0, None)
    keep = np.flatnonzero((w > _ZERO).any(axis=0))
    if keep.size == 0:
        keep = np.array([w.shape[1] - 1])
    return v[:, :, keep] * np.sqrt(w[:, None, keep])


def _compress(f):
    """Same blocks with at most ``d`` factor columns: ``F^dagger = Q R`` gives
    ``F F^dagger = R^dagger R``."""
    if f.shape[2] <= f.shape[1]:
        return f
    r = np.linalg.qr(np.conj(np.swapaxes(f, 1, 2)), mode="r")
    return np.conj(np.swapaxes(r, 1, 2))


def _factor_entropy(f):
    n, d, r = f.shape
    if r <= d:
        gram = np.conj(np.swapaxes(f, 1, 2)) @ f
    else:
        gram = f @ np.conj(np.swapaxes(f, 1, 2))
    lam = np.clip(np.linalg.eigvalsh(gram), 0.0, None).ravel()
    lam = lam[lam > _ZERO]
    return float(max(0.0, -(lam * np.log2(lam)).sum()))


def _kron_factors(a, b):
    a, b = _compress(a), _compress(b)
    na, d1, r1 = a.shape
    nb, d2, r2 = b.shape
    out = np.einsum("aij,bkl->abikjl", a, b)
    return out.reshape(na * nb, d1 * d2, r1 * r2)


def _mix(a, b):
    """Factor of ``(A A^dagger + B B^dagger) / 2`` (possibly wider than ``d``)."""
    return np.concatenate([a, b], axis=2) * _SQRT_HALF


@dataclass(frozen=True, eq=False)
class SynthesizedChannel:
    """A binary-input cq channel produced by ``depth`` polar splits along ``path``.

    ``factors`` holds, for inputs 0 and 1, block factors of shape
    ``(2**classical_registers, d, r)``.
    """

    factors: tuple
    classical_registers: int = 0
    depth: int = 0
    path: str = ""

    def __post_init__(self):
        if len(self.factors) != 2:
            raise DomainError("polar transforms need a binary input alphabet")
        f0, f1 = (np.asarray(f, dtype=complex) for f in self.factors)
        if f0.ndim != 3 or f1.ndim != 3 or f0.shape[:2] != f1.shape[:2]:
            raise ValidationError("both outputs must be block factors of one block shape")
        if f0.shape[0] != 2 ** self.classical_registers:
            raise ValidationError("block count does not match the classical register count")
        object.__setattr__(self, "factors", (f0, f1))

    @classmethod
    def from_blocks(cls, states, classical_registers=0, depth=0, path=""):
        """Build from dense block states ``(blocks, d, d)`` per input."""
        if len(states) != 2:
            raise DomainError("polar transforms need a binary input alphabet")
        return cls(tuple(_factorize(np.asarray(s, dtype=complex)) for s in states),
                   classical_registers, depth, path)

    @classmethod
    def from_cq(cls, channel):
        if len(channel) != 2:
            raise DomainError(f"polar transforms need a binary input alphabet, got {len(channel)} letters")
        return cls.from_blocks([s.entries[None, :, :] for s in channel.states])

    @property
    def states(self):
        """Dense block states ``(blocks, d, d)`` for inputs 0 and 1."""
        return tuple(f @ np.conj(np.swapaxes(f, 1, 2)) for f in self.factors)

    @property
    def dim(self):
        return self.factors[0].shape[1]

    @property
    def blocks(self):
        return self.factors[0].shape[0]

    def output_state(self, u):
        """Full output for input ``u`` as a density matrix (block-diagonal embedding)."""
        blocks = self.states[u]
        n, d, _ = blocks.shape
        full = np.zeros((n * d, n * d), dtype=complex)
        for i in range(n):
            full[i * d:(i + 1) * d, i * d:(i + 1) * d] = blocks[i]
        return DensityMatrix(full, validate=False)

    def chi(self):
        """Symmetric Holevo information (uniform prior)."""
        f0, f1 = self.factors
        return max(0.0, _factor_entropy(_mix(f0, f1))
                   - (_factor_entropy(f0) + _factor_entropy(f1)) / 2.0)

    def degrade(self, channel):
        """Apply ``channel`` to the quantum part of every output block."""
        if not isinstance(channel, KrausChannel):
            raise ValidationError("degradation must be a KrausChannel")
        if channel.dim_in != self.dim:
            raise DimensionError(f"map expects dim {channel.dim_in}, channel has {self.dim}")
        new = tuple(np.concatenate([k @ f for k in channel.kraus_ops], axis=2) for f in self.factors)
        return SynthesizedChannel(new, self.classical_registers, self.depth, self.path)


def _as_synth(w):
    if isinstance(w, SynthesizedChannel):
        return w
    if isinstance(w, CqChannel):
        return SynthesizedChannel.from_cq(w)
    raise ValidationError("expected a SynthesizedChannel or CqChannel")


def split_minus(w):
    """``W-: u1 -> 1/2 sum_u2 rho_{u1^u2} (x) rho_u2``."""
    w = _as_synth(w)
    r0, r1 = w.factors
    out0 = _mix(_kron_factors(r0, r0), _kron_factors(r1, r1))
    out1 = _mix(_kron_factors(r1, r0), _kron_factors(r0, r1))
    return SynthesizedChannel((out0, out1), 2 * w.classical_registers, w.depth + 1, w.path + "-")


def split_plus(w):
    """``W+: u2 -> 1/2 sum_u1 |u1><u1| (x) rho_{u1^u2} (x) rho_u2``.

    The new classical register ``u1`` becomes the leading block index.
    """
    w = _as_synth(w)
    r0, r1 = w.factors
    out0 = np.concatenate([_kron_factors(r0, r0), _kron_factors(r1, r0)]) * _SQRT_HALF
    out1 = np.concatenate([_kron_factors(r1, r1), _kron_factors(r0, r1)]) * _SQRT_HALF
    return SynthesizedChannel((out0, out1), 2 * w.classical_registers + 1, w.depth + 1, w.path + "+")


def conservation_residual(w):
    """``|(chi(W+) + chi(W-))/2 - chi(W)|``."""
    w = _as_synth(w)
    return abs((split_plus(w).chi() + split_minus(w).chi()) / 2.0 - w.chi())


@dataclass(frozen=True)
class PolarizedChannel:
    index: int
    path: str
    chi: float


def polarize(w, depth):
    """All ``2**depth`` synthesized channels with their symmetric Holevo information.

    Index bit ``j`` (most significant first) is 1 when split ``j`` was ``+``.
    """
    if depth > MAX_DEPTH:
        raise CapabilityError(
            f"depth {depth} > {MAX_DEPTH}: output dimension d**(2**depth) is too large for exact computation")
    if depth < 1:
        raise DomainError("depth must be at least 1")
    level = [_as_synth(w)]
    for _ in range(depth):
        level = [child for node in level for child in (split_minus(node), split_plus(node))]
    return [PolarizedChannel(i, node.path, node.chi()) for i, node in enumerate(level)]


@dataclass(frozen=True)
class IndexSet:
    indices: frozenset
    depth: int

    @property
    def rate(self):
        return len(self.indices) / 2 ** self.depth


def secure_index_set(bob, eve, theta):
    """Indices good for Bob (``chi_B >= 1 - theta``) and bad for Eve (``chi_E <= theta``)."""
    if len(bob) != len(eve):
        raise DimensionError(f"Bob has {len(bob)} synthesized channels, Eve has {len(eve)}")
    if not 0.0 < theta < 0.5:
        raise DomainError("theta must lie in (0, 1/2)")
    n = len(bob)
    depth = n.bit_length() - 1
    if 2 ** depth != n:
        raise DimensionError("channel count must be a power of two")
    chosen = frozenset(b.index for b, e in zip(bob, eve) if b.chi >= 1.0 - theta and e.chi <= theta)
    return IndexSet(chosen, depth)


def eve_polarize(bob_channel, eve_map, depth):
    """Eve's synthesized channels: degrade Bob's base outputs, then polarize."""
    return polarize(_as_synth(bob_channel).degrade(eve_map), depth)


def polarization_csv(bob, eve, selected):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["index", "path", "chi_bob", "chi_eve", "selected"])
    for b, e in zip(bob, eve):
        writer.writerow([b.index, b.path, f"{b.chi:.12g}", f"{e.chi:.12g}", int(b.index in selected.indices)])
    return buf.getvalue()


def amplitude_channel(theta):
    """Pure-state cq channel ``0 -> |0>``, ``1 -> cos(theta)|0> + sin(theta)|1>``."""
    return CqChannel([DensityMatrix.pure([1.0, 0.0]),
                      DensityMatrix.pure([np.cos(theta), np.sin(theta)])])
