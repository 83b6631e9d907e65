import json
import math

import numpy as np
import pytest

from conftest import mp_entropy
from wiretap_lab import DimensionError, ValidationError
from wiretap_lab.holevo import CqChannel, Ensemble, holevo_chi, optimize_secrecy_rate, secrecy_rate
from wiretap_lab.qstate import DensityMatrix, KrausChannel, apply_channel, random_channel, random_density_matrix

ZERO, ONE = DensityMatrix.pure([1, 0]), DensityMatrix.pure([0, 1])
PLUS = DensityMatrix.pure([1, 1])


def qubit_entropy(m):
    """Closed-form 2x2 entropy from trace and determinant."""
    tr, det = np.trace(m).real, np.linalg.det(m).real
    disc = math.sqrt(max(tr * tr / 4 - det, 0.0))
    return sum(-x * math.log2(x) for x in (tr / 2 + disc, tr / 2 - disc) if x > 1e-15)


def oracle_chi(states, p1):
    avg = (1 - p1) * states[0] + p1 * states[1]
    return qubit_entropy(avg) - (1 - p1) * qubit_entropy(states[0]) - p1 * qubit_entropy(states[1])


def test_chi_examples():
    assert holevo_chi(Ensemble.uniform([ZERO, ONE])) == pytest.approx(1.0, abs=1e-14)
    assert holevo_chi(Ensemble.uniform([PLUS, PLUS])) == pytest.approx(0.0, abs=1e-12)
    a = 0.5 + math.sqrt(2) / 4
    assert holevo_chi(Ensemble.uniform([ZERO, PLUS])) == pytest.approx(
        float(mp_entropy([a, 1 - a])), abs=1e-12)


def test_ensemble_validation():
    with pytest.raises(ValidationError):
        Ensemble([0.5, 0.6], [ZERO, ONE])
    with pytest.raises(ValidationError):
        Ensemble([1.0], [ZERO, ONE])
    with pytest.raises(DimensionError):
        Ensemble.uniform([ZERO, DensityMatrix.maximally_mixed(3)])


def test_chi_bounded_by_entropy_of_prior():
    rng = np.random.default_rng(0)
    for _ in range(50):
        k = int(rng.integers(2, 5))
        p = rng.dirichlet(np.ones(k))
        ens = Ensemble(p, [random_density_matrix(2, rng) for _ in range(k)])
        chi = holevo_chi(ens)
        assert -1e-12 <= chi <= min(1.0, -(p * np.log2(p)).sum()) + 1e-12


def test_cq_json_round_trip():
    w = CqChannel({"a": ZERO, "b": PLUS})
    doc = json.loads(w.to_json())
    assert doc["inputs"] == ["a", "b"] and doc["dim"] == 2
    back = CqChannel.from_json(w.to_json())
    np.testing.assert_allclose(back.state_for("b").entries, PLUS.entries)


def test_cq_from_dict_checks_dim():
    doc = CqChannel([ZERO, ONE]).to_dict()
    doc["dim"] = 3
    with pytest.raises(DimensionError):
        CqChannel.from_dict(doc)


def test_secrecy_rate_examples():
    bob = CqChannel([ZERO, PLUS])
    u = [0.5, 0.5]
    chi_b = holevo_chi(bob.ensemble(u))
    assert secrecy_rate(bob, KrausChannel.depolarizing(1.0), u) == pytest.approx(chi_b, abs=1e-12)
    assert secrecy_rate(bob, KrausChannel.identity(2), u) == pytest.approx(0.0, abs=1e-12)
    lam = KrausChannel.depolarizing(0.5)
    eve = [apply_channel(lam, s).entries for s in (ZERO, PLUS)]
    expected = oracle_chi([ZERO.entries, PLUS.entries], 0.5) - oracle_chi(eve, 0.5)
    assert secrecy_rate(bob, lam, u) == pytest.approx(expected, abs=1e-12)


def test_secrecy_rate_requires_cptp_eve_map():
    with pytest.raises(ValidationError):
        secrecy_rate(CqChannel([ZERO, ONE]), CqChannel([ZERO, ZERO]), [0.5, 0.5])


def test_optimize_symmetric_matches_fine_grid_oracle():
    bob = CqChannel([ZERO, PLUS])
    lam = KrausChannel.depolarizing(0.5)
    value, prior = optimize_secrecy_rate(bob, lam)
    eve = [apply_channel(lam, s).entries for s in (ZERO, PLUS)]
    grid = np.linspace(0, 1, 100_001)
    oracle = [oracle_chi([ZERO.entries, PLUS.entries], x) - oracle_chi(eve, x) for x in grid]
    i = int(np.argmax(oracle))
    assert prior[1] == pytest.approx(0.5, abs=1e-4)
    assert abs(grid[i] - 0.5) <= 1e-4
    assert value == pytest.approx(oracle[i], abs=1e-9)


def test_optimize_trivial_cases():
    value, _ = optimize_secrecy_rate(CqChannel([ZERO, PLUS]), KrausChannel.identity(2))
    assert value == pytest.approx(0.0, abs=1e-12)
    value, _ = optimize_secrecy_rate(CqChannel([PLUS, PLUS]), KrausChannel.depolarizing(0.3))
    assert value == pytest.approx(0.0, abs=1e-12)


def test_optimize_ternary_alphabet_grid():
    bob = CqChannel([ZERO, ONE, PLUS])
    value, prior = optimize_secrecy_rate(bob, KrausChannel.depolarizing(0.6))
    assert prior.sum() == pytest.approx(1.0)
    assert value >= secrecy_rate(bob, KrausChannel.depolarizing(0.6), [1 / 3] * 3) - 1e-2
    assert value >= secrecy_rate(bob, KrausChannel.depolarizing(0.6), [0.5, 0.5, 0.0]) - 1e-12


def test_post_processing_monotonicity():
    rng = np.random.default_rng(1)
    for _ in range(100):
        states = [random_density_matrix(2, rng) for _ in range(3)]
        p = rng.dirichlet(np.ones(3))
        phi = random_channel(2, rng)
        before = holevo_chi(Ensemble(p, states))
        after = holevo_chi(Ensemble(p, [apply_channel(phi, s) for s in states]))
        assert before - after >= -1e-10
