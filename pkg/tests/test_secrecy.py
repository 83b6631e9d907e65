import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import mp_h
from wiretap_lab import DomainError
from wiretap_lab.channels import BroadcastModel
from wiretap_lab.secrecy import cs, cs_bar_bsc, cs_bar_upper, thm4_lower

half = st.floats(0.0, 0.5, allow_nan=False)


def test_cs_examples():
    assert cs(0.1, 0.2) == pytest.approx(float(mp_h(0.2) - mp_h(0.1)), abs=1e-13)
    assert cs(0.1, 0.2) == pytest.approx(0.252932, abs=1e-6)
    assert cs(0.2, 0.1) == 0.0
    assert cs(0.0, 0.5) == 1.0


def test_cs_bar_examples():
    assert cs_bar_bsc(0.1, 0.2) == pytest.approx(0.357751, abs=1e-6)
    assert cs_bar_bsc(0.3, 0.0) == 0.0
    assert cs_bar_bsc(0.0, 0.3) == pytest.approx(float(mp_h(0.3)), abs=1e-13)
    assert cs_bar_bsc(0.0, 0.3) == pytest.approx(0.881291, abs=1e-6)


@pytest.mark.parametrize("fn", [cs, cs_bar_bsc])
def test_above_half_is_domain_error(fn):
    with pytest.raises(DomainError):
        fn(0.7, 0.2)
    with pytest.raises(DomainError):
        fn(0.2, 0.51)


@given(half, half)
def test_ordering(e, d):
    assert 0.0 <= cs(e, d) <= cs_bar_bsc(e, d) + 1e-12


def test_upper_examples():
    ub = cs_bar_upper(BroadcastModel.from_crossovers(0.1, 0.2))
    assert ub.value == pytest.approx(0.357751, abs=1e-6)
    assert ub.prior[1] == pytest.approx(0.5, abs=1e-4)
    assert cs_bar_upper(BroadcastModel.from_crossovers(0.5, 0.2)).value == pytest.approx(0, abs=1e-12)
    assert cs_bar_upper(BroadcastModel.from_crossovers(0.2, 0.0)).value == pytest.approx(0, abs=1e-12)


@settings(max_examples=25, deadline=None)
@given(half, half)
def test_upper_matches_closed_form(e, d):
    assert cs_bar_upper(BroadcastModel.from_crossovers(e, d)).value == pytest.approx(
        cs_bar_bsc(e, d), abs=1e-4)


def test_thm4_examples():
    lb = thm4_lower(0.1, 0.1, 0.2)
    assert lb.value == pytest.approx(float(mp_h(0.26) - mp_h(0.18)), abs=1e-13)
    assert lb.value == pytest.approx(0.146670, abs=1e-6)
    assert not lb.vacuous
    assert thm4_lower(0, 0, 0.3).value == pytest.approx(float(mp_h(0.3)), abs=1e-13)
    bad = thm4_lower(0.2, 0.2, 0.0)
    assert bad.vacuous
    assert bad.value == pytest.approx(float(mp_h(0.2) - mp_h(0.32)), abs=1e-13)
    assert thm4_lower(0.2, 0.2, 0.0, clamp=True).value == 0.0
    assert thm4_lower(0.2, 0.2, 0.0, clamp=True).vacuous


@given(half, half, half)
def test_thm4_flag_tracks_sign(a, b, e):
    lb = thm4_lower(a, b, e)
    assert lb.vacuous == (lb.value < 0)
    assert np.isfinite(lb.value)
