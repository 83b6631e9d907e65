"""Converse bit-transmission-rate formulas.

Alphabet cardinalities enter as log2 values: the formulas nest logarithms
deeply enough that the raw cardinalities (``|Z| >= 2**2**ly_star`` and the
like) are not representable. Inner arithmetic runs in 50-digit precision.
"""
import warnings
from dataclasses import dataclass, field

import mpmath

from .errors import AmbiguityError, ValidationError

_PREC = 50


@dataclass(frozen=True)
class LetterAlphabets:
    x: frozenset
    y: frozenset
    z: frozenset

    def __post_init__(self):
        for name in ("x", "y", "z"):
            letters = frozenset(getattr(self, name))
            if not letters:
                raise ValidationError(f"alphabet {name} must be non-empty")
            object.__setattr__(self, name, letters)


def overlap(a):
    """Letters shared by all three alphabets; empty exactly when the nested
    intersections are."""
    return set(a.x) & set(a.y) & set(a.z)


def _triple(x, y, z):
    return set(x) & set(y) & set(z)


def prune(a):
    """Remove overlap letters, from Y first and then X, until the triple
    intersection is empty. Letters go in sorted order. Returns ``(x*, y*)``."""
    x, y, z = set(a.x), set(a.y), set(a.z)
    for source in (y, x):
        for letter in sorted(_triple(x, y, z), key=repr):
            if not _triple(x, y, z):
                break
            source.discard(letter)
    return x, y


@dataclass(frozen=True)
class AlphabetSizes:
    """log2 cardinalities. Missing pruned sizes default to the unpruned ones
    and vice versa."""

    lx: float = None
    lx_star: float = None
    ly: float = None
    ly_star: float = None
    lz: float = None

    def __post_init__(self):
        fill = {"lx": self.lx_star, "lx_star": self.lx, "ly": self.ly_star, "ly_star": self.ly}
        for name, other in fill.items():
            if getattr(self, name) is None:
                object.__setattr__(self, name, other)
        for name in ("lx", "lx_star", "ly", "ly_star", "lz"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise ValidationError(f"{name}={v!r} must be a positive log2 size")
        if self.lx is not None and self.lx_star > self.lx:
            raise ValidationError("pruned X cannot exceed X")
        if self.ly is not None and self.ly_star > self.ly:
            raise ValidationError("pruned Y cannot exceed Y")

    def require(self, *names):
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            raise ValidationError(f"missing sizes: {', '.join(missing)}")


@dataclass(frozen=True)
class RateDomainError:
    term: str
    condition: str

    def as_dict(self):
        return {"term": self.term, "condition": self.condition}


@dataclass(frozen=True)
class RateResult:
    value: float = None
    branch: int = None
    error: RateDomainError = None

    @property
    def ok(self):
        return self.error is None

    def as_dict(self):
        if self.ok:
            return {"branch": self.branch, "value": self.value}
        return {"branch": self.branch, "error": self.error.as_dict()}


def _loglog(log_num, log_den, label):
    """``log2 log2 (num / 2**log_den)`` where ``log2 num = log_num``."""
    inner = log_num - log_den
    if inner <= 0:
        return None, RateDomainError("loglog", f"{label} > 1")
    return mpmath.log(inner, 2), None


# branch -> (loglog numerator field, loglog denominator field, label,
#            log term numerator field, log term denominator field)
_BRANCHES = {
    1: ("ly_star", "lx_star", "log|Y*|/|X*|", "lz", "ly_star"),
    2: ("lx", "ly_star", "log|X|/|Y*|", "ly_star", "lx"),
    3: ("ly_star", "lx_star", "log|Y*|/|X*|", "ly_star", "lx"),
    4: ("ly_star", "lx_star", "log|Y*|/|X*|", "lz", "ly_star"),
}


def rate_branch(branch, sizes):
    """Evaluate one piece of the rate formula: ``loglog[log A / B] + log[log C / D]``."""
    if branch not in _BRANCHES:
        raise ValidationError(f"branch must be 1..4, got {branch!r}")
    num, den, label, lnum, lden = _BRANCHES[branch]
    sizes.require(num, den, lnum, lden)
    with mpmath.workdps(_PREC):
        first, err = _loglog(mpmath.log(mpmath.mpf(getattr(sizes, num)), 2),
                             mpmath.mpf(getattr(sizes, den)), label)
        if err is not None:
            return RateResult(branch=branch, error=err)
        second = mpmath.log(mpmath.mpf(getattr(sizes, lnum)), 2) - mpmath.mpf(getattr(sizes, lden))
        return RateResult(float(first + second), branch)


def select_branch(sizes):
    """Branch whose guards ``(|X| vs |Y*|, |Y*| vs |Z|)`` hold."""
    sizes.require("lx", "ly_star", "lz")
    if sizes.lx == sizes.ly_star:
        raise AmbiguityError("|X| = |Y*|: no branch applies")
    if sizes.ly_star == sizes.lz:
        raise AmbiguityError("|Y*| = |Z|: no branch applies")
    x_big = sizes.lx > sizes.ly_star
    y_big = sizes.ly_star > sizes.lz
    return {(True, True): 1, (False, False): 2, (True, False): 3, (False, True): 4}[(x_big, y_big)]


def rate(sizes):
    """Select the branch and evaluate it; guard ties become an error record."""
    try:
        branch = select_branch(sizes)
    except AmbiguityError as exc:
        return RateResult(error=RateDomainError("guard", str(exc)))
    return rate_branch(branch, sizes)


class RegimeWarning(UserWarning):
    pass


@dataclass(frozen=True)
class AdaptiveRates:
    r1: RateResult
    r2: RateResult
    r3: RateResult
    warnings: tuple = field(default=())

    def __iter__(self):
        return iter((self.r1, self.r2, self.r3))

    def as_dict(self):
        return {"r1": self.r1.as_dict(), "r2": self.r2.as_dict(), "r3": self.r3.as_dict(),
                "warnings": list(self.warnings)}


def adaptive_rates(pb, fc, bc):
    """Rates over the public broadcast (``pb``), forward conceptual (``fc``) and
    backward conceptual (``bc``) channels, each evaluated independently."""
    notes = []
    if fc.lx > pb.lx - 1:
        notes.append("forward-conceptual regime |𝒳| << |X| violated")
    if abs(bc.lx - pb.lx) > 1:
        notes.append("backward-conceptual regime |X_bc| ≈ |X| violated")
    for note in notes:
        warnings.warn(note, RegimeWarning, stacklevel=2)
    return AdaptiveRates(rate(pb), rate(fc), rate(bc), tuple(notes))
