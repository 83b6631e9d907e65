import numpy as np

from .errors import DomainError, ValidationError

DIST_ATOL = 1e-12


def check_prob(p, name="p", upper=1.0):
    p = float(p)
    if not (0.0 <= p <= upper):
        raise DomainError(f"{name}={p!r} must lie in [0, {upper:g}]")
    return p


def check_dist(weights, name="distribution"):
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise ValidationError(f"{name} must be a non-empty 1-d array")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise ValidationError(f"{name} has negative or non-finite weights")
    if abs(w.sum() - 1.0) > DIST_ATOL:
        raise ValidationError(f"{name} sums to {w.sum()!r}, expected 1")
    return w


def check_joint(table, name="joint table"):
    t = np.asarray(table, dtype=float)
    if t.ndim != 2 or t.size == 0:
        raise ValidationError(f"{name} must be a non-empty 2-d array")
    if np.any(t < 0) or not np.all(np.isfinite(t)):
        raise ValidationError(f"{name} has negative or non-finite entries")
    if abs(t.sum() - 1.0) > DIST_ATOL:
        raise ValidationError(f"{name} sums to {t.sum()!r}, expected 1")
    return t


def check_positive_int(value, name, minimum=1):
    if int(value) != value or value < minimum:
        raise DomainError(f"{name}={value!r} must be an integer >= {minimum}")
    return int(value)
