import warnings

import mpmath
import pytest
from hypothesis import given, strategies as st

from wiretap_lab import AmbiguityError, ValidationError
from wiretap_lab.rates import (
    AlphabetSizes, LetterAlphabets, RegimeWarning, adaptive_rates, overlap, prune, rate,
    rate_branch, select_branch,
)


def A(x, y, z):
    return LetterAlphabets(frozenset(x), frozenset(y), frozenset(z))


def test_overlap_examples():
    assert overlap(A("ab", "bc", "bd")) == {"b"}
    assert overlap(A("a", "b", "c")) == set()
    assert overlap(A("abc", "abc", "abc")) == set("abc")


def test_prune_examples():
    assert prune(A("ab", "bc", "bd")) == ({"a", "b"}, {"c"})
    assert prune(A("a", "b", "c")) == ({"a"}, {"b"})
    assert prune(A("s", "s", "s")) == ({"s"}, set())


letters = st.frozensets(st.sampled_from("abcdef"), min_size=1)


@given(letters, letters, letters)
def test_prune_clears_overlap_and_only_shrinks(x, y, z):
    xs, ys = prune(A(x, y, z))
    assert not (xs & ys & set(z))
    assert xs <= x and ys <= y
    if not (x & y & z):
        assert (xs, ys) == (set(x), set(y))


def test_empty_alphabet_rejected():
    with pytest.raises(ValidationError):
        A("", "a", "b")


def test_branch_one_oracle():
    res = rate_branch(1, AlphabetSizes(lx_star=2, ly_star=32, lz=2**40))
    with mpmath.workdps(50):
        # log2 log2(log2|Y*| / |X*|) + log2 log2|Z| - log2|Y*|
        expected = mpmath.log(mpmath.log(mpmath.mpf(32) / 2**2, 2), 2) + (40 - 32)
    assert res.ok and res.branch == 1
    assert res.value == pytest.approx(float(expected), abs=1e-12)
    assert res.value == pytest.approx(9.584963, abs=1e-6)


def test_branch_two_domain_error():
    res = rate_branch(2, AlphabetSizes(lx=8, ly_star=32))
    assert not res.ok
    assert res.as_dict() == {"branch": 2, "error": {"term": "loglog", "condition": "log|X|/|Y*| > 1"}}


def test_loglog_collapses_at_two():
    res = rate_branch(1, AlphabetSizes(lx_star=2, ly_star=8, lz=2**8))
    assert res.value == 0.0


def test_missing_sizes_and_bad_branch():
    with pytest.raises(ValidationError):
        rate_branch(1, AlphabetSizes(lx=4))
    with pytest.raises(ValidationError):
        rate_branch(5, AlphabetSizes(lx=4, ly=4, lz=4))
    with pytest.raises(ValidationError):
        AlphabetSizes(lx=2, lx_star=3)


def test_select_branch_examples():
    assert select_branch(AlphabetSizes(lx=40, ly_star=32, lz=8)) == 1
    assert select_branch(AlphabetSizes(lx=8, ly_star=32, lz=64)) == 2
    with pytest.raises(AmbiguityError):
        select_branch(AlphabetSizes(lx=32, ly_star=32, lz=8))


def test_rate_records_ties():
    res = rate(AlphabetSizes(lx=32, ly_star=32, lz=8))
    assert not res.ok and res.error.term == "guard"


def branch1_sizes(lx):
    return AlphabetSizes(lx=lx, lx_star=2, ly_star=32, lz=16)


def test_adaptive_all_finite():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        res = adaptive_rates(branch1_sizes(64), branch1_sizes(40), branch1_sizes(64))
    assert all(r.ok and r.branch == 1 for r in res)


def test_adaptive_forward_regime_warning():
    with pytest.warns(RegimeWarning, match="forward-conceptual regime"):
        res = adaptive_rates(branch1_sizes(64), branch1_sizes(64), branch1_sizes(64))
    assert res.warnings == ("forward-conceptual regime |𝒳| << |X| violated",)


def test_adaptive_backward_regime_warning():
    with pytest.warns(RegimeWarning, match="backward-conceptual"):
        adaptive_rates(branch1_sizes(64), branch1_sizes(40), branch1_sizes(48))


def test_adaptive_domain_failure_is_isolated():
    bad = AlphabetSizes(lx=8, ly_star=32, lz=64)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        res = adaptive_rates(branch1_sizes(64), bad, branch1_sizes(64))
    assert res.r1.ok and res.r3.ok
    assert not res.r2.ok and res.r2.error.condition == "log|X|/|Y*| > 1"
    assert res.r1.value == res.r3.value
