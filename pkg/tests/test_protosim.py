import dataclasses
import math
from math import comb

import numpy as np
import pytest

from wiretap_lab import ConfigurationError, DomainError
from wiretap_lab.protosim import (
    Estimate, ProtocolConfig, SimReport, authentication_probability, block_mutual_information,
    compare, domination_crossovers, domination_experiment, fano_experiment, resource_distance,
    run_transmission, simulate,
)

GOLDEN = ProtocolConfig(n=64, p=0.01, q=0.25, rate=0.5, tau=0.13, trials=10_000, seed=7)
GOLDEN_P_DE = (98, 0.0098)
GOLDEN_P_FA = (2238, 0.2238)


def acceptance_fraction(code, radius):
    """Exact fraction of all 2**n words within ``radius`` of some codeword."""
    n = code.n
    words = np.arange(2**n, dtype=np.uint32)
    book = np.array([int("".join(map(str, w[::-1])), 2) for w in code.codewords()], dtype=np.uint32)
    best = np.full(words.shape, n)
    for c in book:
        best = np.minimum(best, np.bitwise_count(words ^ c))
    return float((best <= radius).mean())


def within(est, target, k=3.0):
    sigma = math.sqrt(target * (1 - target) / est.trials)
    return abs(est.value - target) <= k * sigma


def test_config_defaults_and_validation():
    cfg = ProtocolConfig()
    assert cfg.tau == pytest.approx(0.13) and cfg.radius == 8
    assert cfg.theorem3_regime
    assert not ProtocolConfig(p=0.3, q=0.2).theorem3_regime
    with pytest.raises(ConfigurationError):
        ProtocolConfig(rate=1.0)
    with pytest.raises(ConfigurationError):
        ProtocolConfig(tau=0.6)
    with pytest.raises(DomainError):
        ProtocolConfig(p=1.2)


def test_estimate_wilson_interval():
    e = Estimate.from_counts(0, 100)
    assert e.value == 0.0 and e.low == 0.0 and 0 < e.high < 0.05
    e = Estimate.from_counts(50, 100)
    assert e.low < 0.5 < e.high
    assert Estimate.from_counts(0, 0) == Estimate(0.0, 0.0, 0.0, 0, 0)


def test_noiseless_no_attack():
    report = run_transmission(dataclasses.replace(GOLDEN, p=0.0, trials=2000), attack=False)
    assert report.p_de.value == 0.0
    assert report.p_fa.trials == 0


def test_golden_record():
    report, _ = simulate(GOLDEN)
    assert (report.p_de.count, report.p_de.value) == GOLDEN_P_DE
    assert (report.p_fa.count, report.p_fa.value) == GOLDEN_P_FA
    assert resource_distance(report) == GOLDEN_P_FA[1]
    assert authentication_probability(GOLDEN).value == pytest.approx(1 - GOLDEN_P_DE[1], abs=1e-15)


def test_worker_count_does_not_change_results():
    assert simulate(GOLDEN, workers=1)[0] == simulate(GOLDEN, workers=3)[0]


def test_keep_trials_rows():
    cfg = dataclasses.replace(GOLDEN, trials=5000)
    report, rows = simulate(cfg, keep_trials=True)
    assert set(rows) == {"bob_distance", "bob_ok", "forgery_distance", "forgery_accepted"}
    assert int((~rows["bob_ok"]).sum()) == report.p_de.count
    assert int(rows["forgery_accepted"].sum()) == report.p_fa.count


def test_uniform_eve_false_acceptance_matches_exact_oracle():
    cfg = ProtocolConfig(n=16, p=0.01, q=0.5, rate=0.5, tau=0.07, trials=100_000, seed=3)
    code = cfg.code()
    assert cfg.radius == 1
    accept = acceptance_fraction(code, cfg.radius)
    exact = accept * (1 - 2.0**-code.k)
    report = run_transmission(cfg)
    assert within(report.p_fa, exact)
    # disjoint unit balls, so the Hamming-ball volume ratio is the same baseline
    volume = min(1.0, sum(comb(16, i) for i in range(2)) * 2**code.k / 2**16)
    assert within(report.p_fa, volume)


def test_authentication_under_uniform_noise():
    cfg = ProtocolConfig(n=16, p=0.5, q=0.5, rate=0.25, tau=0.13, trials=100_000, seed=2)
    code = cfg.code()
    assert cfg.radius == 2
    exact = acceptance_fraction(code, cfg.radius) * 2.0**-code.k
    binomial_tail = sum(comb(16, i) for i in range(3)) / 2**16
    assert exact == pytest.approx(binomial_tail, rel=1e-12)
    assert within(authentication_probability(cfg), exact)


def test_authentication_noiseless():
    assert authentication_probability(dataclasses.replace(GOLDEN, p=0.0, trials=1000)).value == 1.0


def test_resource_distance_definition():
    mk = lambda a, b: SimReport(Estimate(a, a, a, 0, 1), Estimate(b, b, b, 0, 1), 1, 0, True)  # noqa: E731
    assert resource_distance(mk(0.01, 0.02)) == 0.02
    assert resource_distance(mk(0.0, 0.0)) == 0.0


def test_compare():
    lo, hi = Estimate.from_counts(10, 1000), Estimate.from_counts(100, 1000)
    assert compare(lo, hi, "<") is True
    assert compare(lo, hi, ">") is False
    assert compare(lo, Estimate.from_counts(11, 1000), "<") is None


def test_domination_crossovers():
    c = domination_crossovers(0.1, 0.1, 0.05, 0.25)
    assert c["forward"]["eve"] == pytest.approx(0.275)
    assert c["public"]["eve"] == 0.05
    assert domination_crossovers(0.1, 0.1, 0.05, 0.0)["forward"] == c["public"]


def test_domination_preconditions():
    with pytest.raises(ConfigurationError):
        domination_experiment(0.1, 0.1, 0.2, 0.25, GOLDEN)
    with pytest.raises(ConfigurationError):
        domination_experiment(0.1, 0.1, 0.05, 0.5, GOLDEN)


def test_domination_without_cascade_is_not_reversed():
    base = dataclasses.replace(GOLDEN, trials=20_000)
    report = domination_experiment(0.1, 0.1, 0.05, 0.0, base)
    assert report.group1["holds"] is True
    assert report.group2["holds"] is not True


def test_block_mutual_information_limits():
    code = ProtocolConfig(n=16, rate=0.25).code()
    assert block_mutual_information(code, 0.5) == pytest.approx(0.0, abs=1e-12)
    assert block_mutual_information(code, 0.0) == pytest.approx(code.k, abs=1e-12)
    mid = block_mutual_information(code, 0.1)
    assert 0 < mid < code.k


def test_fano_consistency_golden():
    check = fano_experiment(GOLDEN)
    assert check.messages == 2**32
    assert check.consistent
    assert check.eve_error.value >= check.fano_bound - 3 * check.eve_error.sigma
