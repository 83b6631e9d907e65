"""Density matrices, Kraus channels and the standard distance measures.

Trace norms here are unnormalised, so ``trace_distance`` of orthogonal pure
states is 2.
"""
import json

import numpy as np

from .errors import DimensionError, ValidationError

HERMITIAN_TOL = 1e-10
NEG_EIG_TOL = 1e-10
TRACE_TOL = 1e-10
ZERO_EIG = 1e-12


def _eigvalsh(m):
    return np.linalg.eigvalsh((m + m.conj().T) / 2.0)


class DensityMatrix:
    """A validated, immutable density matrix."""

    __slots__ = ("_m",)

    def __init__(self, entries, validate=True):
        m = np.array(entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise ValidationError(f"density matrix must be square, got shape {m.shape}")
        if validate:
            if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
                raise ValidationError("density matrix is not Hermitian")
            if abs(np.trace(m).real - 1.0) > TRACE_TOL:
                raise ValidationError(f"trace is {np.trace(m).real!r}, expected 1")
            if _eigvalsh(m).min() < -NEG_EIG_TOL:
                raise ValidationError("density matrix has a negative eigenvalue")
        m.setflags(write=False)
        self._m = m

    @property
    def entries(self):
        return self._m

    @property
    def dim(self):
        return self._m.shape[0]

    def eigenvalues(self):
        """Eigenvalues with round-off negatives clamped to zero."""
        return np.clip(_eigvalsh(self._m), 0.0, None)

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim})"

    @classmethod
    def pure(cls, vector):
        v = np.asarray(vector, dtype=complex).ravel()
        v = v / np.linalg.norm(v)
        return cls(np.outer(v, v.conj()))

    @classmethod
    def maximally_mixed(cls, dim):
        return cls(np.eye(dim) / dim)

    @classmethod
    def diag(cls, weights):
        return cls(np.diag(np.asarray(weights, dtype=float)))

    def to_dict(self):
        flat = self._m.ravel()
        return {"dim": self.dim, "entries": [[float(z.real), float(z.imag)] for z in flat]}

    @classmethod
    def from_dict(cls, doc):
        d = int(doc["dim"])
        pairs = np.asarray(doc["entries"], dtype=float)
        if pairs.shape != (d * d, 2):
            raise ValidationError(f"expected {d * d} [re, im] pairs")
        return cls((pairs[:, 0] + 1j * pairs[:, 1]).reshape(d, d))

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def _same_dim(rho, sigma):
    if rho.dim != sigma.dim:
        raise DimensionError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")


def entropy_of_eigenvalues(lam):
    lam = np.asarray(lam, dtype=float)
    lam = lam[lam > ZERO_EIG]
    return float(max(0.0, -(lam * np.log2(lam)).sum()))


def von_neumann_entropy(rho):
    return entropy_of_eigenvalues(rho.eigenvalues())


def trace_norm(m):
    return float(np.abs(_eigvalsh(np.asarray(m))).sum())


def trace_distance(rho, sigma):
    """Unnormalised trace norm ``||rho - sigma||_1`` (at most 2)."""
    _same_dim(rho, sigma)
    return trace_norm(rho.entries - sigma.entries)


def _psd_sqrt(m):
    w, v = np.linalg.eigh((m + m.conj().T) / 2.0)
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def fidelity(rho, sigma):
    """Uhlmann fidelity ``(Tr sqrt(sqrt(rho) sigma sqrt(rho)))**2``."""
    _same_dim(rho, sigma)
    s = _psd_sqrt(rho.entries)
    inner = s @ sigma.entries @ s
    value = np.sqrt(np.clip(_eigvalsh(inner), 0.0, None)).sum() ** 2
    return float(min(1.0, max(0.0, value)))


def relative_entropy(rho, sigma):
    """Quantum relative entropy in bits; ``inf`` when supp(rho) is not in supp(sigma)."""
    _same_dim(rho, sigma)
    lr, vr = np.linalg.eigh(rho.entries)
    ls, vs = np.linalg.eigh(sigma.entries)
    lr = np.clip(lr, 0.0, None)
    ls = np.clip(ls, 0.0, None)
    keep_r = lr > ZERO_EIG
    null_s = ls <= ZERO_EIG
    # overlap[i, j] = |<r_i|s_j>|^2
    overlap = np.abs(vr.conj().T @ vs) ** 2
    if np.any(overlap[np.ix_(keep_r, null_s)] > 1e-10):
        return float("inf")
    lr, overlap = lr[keep_r], overlap[np.ix_(keep_r, ~null_s)]
    value = float(np.sum(lr * np.log2(lr)) - np.sum(lr[:, None] * overlap * np.log2(ls[~null_s])))
    return max(0.0, value)


def tensor(a, b):
    return DensityMatrix(np.kron(a.entries, b.entries), validate=False)


class KrausChannel:
    """CPTP map ``rho -> sum_k K rho K^dagger``."""

    __slots__ = ("_ops",)

    COMPLETENESS_TOL = 1e-10

    def __init__(self, kraus_ops, validate=True):
        ops = [np.array(k, dtype=complex) for k in kraus_ops]
        if not ops:
            raise ValidationError("a channel needs at least one Kraus operator")
        shape = ops[0].shape
        if any(k.ndim != 2 or k.shape != shape for k in ops):
            raise ValidationError("Kraus operators must share one 2-d shape")
        if validate:
            res = completeness_residual(ops)
            if res > self.COMPLETENESS_TOL:
                raise ValidationError(f"Kraus operators are not trace preserving (residual {res:.3g})")
        for k in ops:
            k.setflags(write=False)
        self._ops = tuple(ops)

    @property
    def kraus_ops(self):
        return self._ops

    @property
    def dim_in(self):
        return self._ops[0].shape[1]

    @property
    def dim_out(self):
        return self._ops[0].shape[0]

    def __repr__(self):
        return f"KrausChannel({self.dim_in}->{self.dim_out}, rank={len(self._ops)})"

    def apply_matrix(self, m):
        return sum(k @ m @ k.conj().T for k in self._ops)

    def then(self, other):
        """Channel applying ``self`` first, then ``other``."""
        return KrausChannel([b @ a for a in self._ops for b in other._ops])

    def tensor(self, other):
        return KrausChannel([np.kron(a, b) for a in self._ops for b in other._ops])

    @classmethod
    def identity(cls, dim):
        return cls([np.eye(dim)])

    @classmethod
    def depolarizing(cls, lam, dim=2):
        """``(1 - lam) rho + lam I/d`` via a Pauli/Weyl Kraus set for d=2."""
        if not 0.0 <= lam <= 1.0:
            raise ValidationError("depolarizing parameter must lie in [0, 1]")
        if dim != 2:
            return cls._depolarizing_generic(lam, dim)
        x = np.array([[0, 1], [1, 0]])
        y = np.array([[0, -1j], [1j, 0]])
        z = np.diag([1, -1])
        ops = [np.sqrt(1 - 3 * lam / 4) * np.eye(2)]
        ops += [np.sqrt(lam / 4) * p for p in (x, y, z)]
        return cls(ops)

    @classmethod
    def _depolarizing_generic(cls, lam, dim):
        ops = [np.sqrt(1 - lam) * np.eye(dim)]
        for i in range(dim):
            for j in range(dim):
                e = np.zeros((dim, dim))
                e[i, j] = 1.0
                ops.append(np.sqrt(lam / dim) * e)
        return cls(ops)

    def to_dict(self):
        return {"dim_in": self.dim_in, "dim_out": self.dim_out,
                "kraus": [[[float(z.real), float(z.imag)] for z in k.ravel()] for k in self._ops]}

    @classmethod
    def from_dict(cls, doc):
        shape = (int(doc["dim_out"]), int(doc["dim_in"]))
        ops = []
        for flat in doc["kraus"]:
            pairs = np.asarray(flat, dtype=float)
            ops.append((pairs[:, 0] + 1j * pairs[:, 1]).reshape(shape))
        return cls(ops)


def completeness_residual(ops):
    ops = ops.kraus_ops if isinstance(ops, KrausChannel) else ops
    total = sum(k.conj().T @ k for k in ops)
    return float(np.max(np.abs(total - np.eye(total.shape[0]))))


def apply_channel(phi, rho):
    if phi.dim_in != rho.dim:
        raise DimensionError(f"channel expects dim {phi.dim_in}, state has dim {rho.dim}")
    return DensityMatrix(phi.apply_matrix(rho.entries), validate=False)


def check_dpi(phi, rho, sigma):
    """``D(rho||sigma) - D(phi rho||phi sigma)``; must not be negative.

    An infinite pre-image divergence satisfies the inequality trivially and
    returns ``inf``.
    """
    before = relative_entropy(rho, sigma)
    if np.isinf(before):
        return float("inf")
    return before - relative_entropy(apply_channel(phi, rho), apply_channel(phi, sigma))


def check_contractivity(phi, rho, sigma):
    """``||rho - sigma||_1 - ||phi rho - phi sigma||_1``."""
    return trace_distance(rho, sigma) - trace_distance(apply_channel(phi, rho),
                                                       apply_channel(phi, sigma))


def random_density_matrix(dim, rng, rank=None):
    """Ginibre-ensemble state ``G G^dagger / Tr``."""
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real, validate=False)


def random_pure_state(dim, rng):
    return random_density_matrix(dim, rng, rank=1)


def random_channel(dim_in, rng, dim_out=None, n_kraus=None):
    """Random CPTP map from a Haar-ish isometry ``dim_in -> dim_out * n_kraus``."""
    dim_out = dim_in if dim_out is None else dim_out
    n_kraus = dim_in * dim_out if n_kraus is None else n_kraus
    g = rng.normal(size=(dim_out * n_kraus, dim_in)) + 1j * rng.normal(size=(dim_out * n_kraus, dim_in))
    q, r = np.linalg.qr(g)
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    return KrausChannel([q[k * dim_out:(k + 1) * dim_out] for k in range(n_kraus)])
