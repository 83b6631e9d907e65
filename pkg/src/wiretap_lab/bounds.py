"""Lower bounds on the eavesdropper's error probability.

Several of these expressions leave [0, 1] in most parameter regimes; results
carry a ``vacuous`` flag instead of being silently clamped.
"""
import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_positive_int
from .errors import DomainError
from .info import binary_entropy
from .qstate import trace_distance

DEFAULT_M_THRESHOLD = 16


@dataclass(frozen=True)
class FanoInputs:
    M: int
    chi: float

    def __post_init__(self):
        check_positive_int(self.M, "M", minimum=2)
        if not self.chi >= 0:
            raise DomainError(f"chi={self.chi!r} must be non-negative")


@dataclass(frozen=True)
class BoundValue:
    value: float
    vacuous: bool
    regime: str = ""


def _fano_lhs(p, M):
    return binary_entropy(p) + p * math.log2(M - 1)


def fano_min_error(inputs, tol=1e-12):
    """Smallest error probability consistent with Fano's inequality.

    Solves ``H_b(p) + p log2(M-1) >= log2 M - chi`` for the least ``p`` on
    ``[0, (M-1)/M]``, where the left side increases monotonically.
    """
    if not isinstance(inputs, FanoInputs):
        inputs = FanoInputs(*inputs)
    M, chi = inputs.M, inputs.chi
    target = math.log2(M) - chi
    if target <= 0:
        return 0.0
    lo, hi = 0.0, (M - 1) / M
    if _fano_lhs(hi, M) <= target:
        return hi
    while hi - lo > tol:
        mid = (lo + hi) / 2.0
        if _fano_lhs(mid, M) >= target:
            hi = mid
        else:
            lo = mid
    return hi


def _flag(value):
    return not (0.0 <= value <= 1.0)


def lemma323_bound(N, M, chi, clamp=False):
    """``log2(1/N) * (log2 M - chi - 1)``, returned verbatim with a vacuity flag."""
    check_positive_int(N, "N")
    check_positive_int(M, "M", minimum=2)
    value = -math.log2(N) * (math.log2(M) - chi - 1.0)
    value = value + 0.0  # normalise -0.0
    vacuous = _flag(value)
    if clamp:
        value = min(1.0, max(0.0, value))
    return BoundValue(value, vacuous)


def helstrom_multistate_lower(M, eps):
    """``max(0, 1 - (1 + eps (M - 1)) / M)`` for pairwise trace distance ``eps``."""
    check_positive_int(M, "M", minimum=2)
    if not 0.0 <= eps <= 2.0:
        raise DomainError(f"eps={eps!r} must lie in [0, 2]")
    return max(0.0, 1.0 - (1.0 + eps * (M - 1)) / M)


def helstrom_two_state(rho0, rho1):
    """Optimal success probability for equiprobable ``rho0`` vs ``rho1``."""
    return 0.5 + trace_distance(rho0, rho1) / 4.0


def helstrom_measurement(rho0, rho1):
    """Projector onto the positive part of ``rho0 - rho1`` (guess 0 on that outcome)."""
    w, v = np.linalg.eigh(rho0.entries - rho1.entries)
    pos = v[:, w > 0]
    return pos @ pos.conj().T


def c_eve_gap(N, M, chi, eps, m_threshold=DEFAULT_M_THRESHOLD, clamp=False):
    """Piecewise gap: Helstrom form for ``M <= m_threshold``, log form otherwise."""
    if M <= m_threshold:
        value = 1.0 - (1.0 + eps * (M - 1)) / M
        vacuous = _flag(value)
        if clamp:
            value = min(1.0, max(0.0, value))
        return BoundValue(value, vacuous, "small-M")
    b = lemma323_bound(N, M, chi, clamp=clamp)
    return BoundValue(b.value, b.vacuous, "large-M")
