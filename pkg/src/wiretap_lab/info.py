"""Scalar information measures in bits.

All logarithms are base 2 and ``0 log 0`` is taken as 0.
"""
import numpy as np

from ._validation import check_dist, check_joint, check_prob


def _plogp(p):
    p = np.asarray(p, dtype=float)
    out = np.zeros_like(p)
    mask = p > 0
    out[mask] = p[mask] * np.log2(p[mask])
    return out


def binary_entropy(p):
    """Entropy of a Bernoulli(p) variable, ``-p log p - (1-p) log(1-p)``."""
    p = check_prob(p)
    return float(-(_plogp(p) + _plogp(1.0 - p)))


def binary_entropy_array(p):
    """Vectorised :func:`binary_entropy` without per-element validation."""
    p = np.asarray(p, dtype=float)
    return -(_plogp(p) + _plogp(1.0 - p))


def shannon_entropy(weights):
    w = check_dist(weights)
    return float(max(0.0, -_plogp(w).sum()))


def _entropy_unchecked(w):
    return float(max(0.0, -_plogp(np.ravel(w)).sum()))


def joint_entropy(table):
    return _entropy_unchecked(check_joint(table))


def mutual_information(table):
    """I(X;Y) = H(X) + H(Y) - H(X,Y) for a joint table indexed ``[x, y]``."""
    t = check_joint(table)
    mi = (_entropy_unchecked(t.sum(axis=1)) + _entropy_unchecked(t.sum(axis=0))
          - _entropy_unchecked(t))
    return max(0.0, mi)


def conditional_entropy(table):
    """H(Y|X) = H(X,Y) - H(X) for a joint table indexed ``[x, y]``."""
    t = check_joint(table)
    return max(0.0, _entropy_unchecked(t) - _entropy_unchecked(t.sum(axis=1)))


def cascade(eps, delta):
    """Crossover of two binary symmetric channels in series."""
    eps = check_prob(eps, "eps")
    delta = check_prob(delta, "delta")
    # keep the identity and absorbing points exact under rounding
    if eps == 0.5 or delta == 0.5:
        return 0.5
    if delta == 0.0:
        return eps
    if eps == 0.0:
        return delta
    return eps + delta - 2.0 * eps * delta
