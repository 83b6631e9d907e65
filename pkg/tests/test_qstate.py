import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import mp_entropy
from wiretap_lab import DimensionError, ValidationError
from wiretap_lab.qstate import (
    DensityMatrix, KrausChannel, apply_channel, check_contractivity, check_dpi,
    completeness_residual, fidelity, random_channel, random_density_matrix, random_pure_state,
    relative_entropy, tensor, trace_distance, von_neumann_entropy,
)

ZERO, ONE = DensityMatrix.pure([1, 0]), DensityMatrix.pure([0, 1])
PLUS = DensityMatrix.pure([1, 1])
MIXED = DensityMatrix.maximally_mixed(2)
FULL_DEPOL = KrausChannel.depolarizing(1.0)
seeds = st.integers(0, 2**32 - 1)


def test_validation_rejects_bad_matrices():
    with pytest.raises(ValidationError):
        DensityMatrix([[0.5, 0.1], [0.2, 0.5]])
    with pytest.raises(ValidationError):
        DensityMatrix([[0.6, 0], [0, 0.6]])
    with pytest.raises(ValidationError):
        DensityMatrix([[1.5, 0], [0, -0.5]])
    with pytest.raises(ValidationError):
        DensityMatrix([1, 0])


def test_json_round_trip():
    rho = random_density_matrix(3, np.random.default_rng(0))
    doc = json.loads(rho.to_json())
    assert doc["dim"] == 3 and len(doc["entries"]) == 9
    np.testing.assert_allclose(DensityMatrix.from_json(rho.to_json()).entries, rho.entries, atol=1e-15)


def test_entropy_examples():
    assert von_neumann_entropy(MIXED) == pytest.approx(1.0, abs=1e-14)
    assert von_neumann_entropy(PLUS) == pytest.approx(0.0, abs=1e-12)
    a, b = 0.5 + math.sqrt(2) / 4, 0.5 - math.sqrt(2) / 4
    assert von_neumann_entropy(DensityMatrix.diag([a, b])) == pytest.approx(
        float(mp_entropy([a, b])), abs=1e-13)


@settings(max_examples=30)
@given(seeds, st.integers(2, 4))
def test_entropy_bounds_and_unitary_invariance(seed, dim):
    rng = np.random.default_rng(seed)
    rho = random_density_matrix(dim, rng)
    s = von_neumann_entropy(rho)
    assert -1e-12 <= s <= math.log2(dim) + 1e-12
    q, _ = np.linalg.qr(rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))
    rotated = DensityMatrix(q @ rho.entries @ q.conj().T, validate=False)
    assert von_neumann_entropy(rotated) == pytest.approx(s, abs=1e-10)


def test_trace_distance_examples():
    assert trace_distance(ZERO, ONE) == pytest.approx(2.0)
    assert trace_distance(PLUS, PLUS) == pytest.approx(0.0, abs=1e-15)
    # pure-state oracle 2 sqrt(1 - |<0|+>|^2)
    assert trace_distance(ZERO, PLUS) == pytest.approx(2 * math.sqrt(0.5), abs=1e-12)


def test_fidelity_examples():
    rho = random_density_matrix(2, np.random.default_rng(1))
    assert fidelity(rho, rho) == pytest.approx(1.0, abs=1e-10)
    assert fidelity(ZERO, ONE) == pytest.approx(0.0, abs=1e-12)
    assert fidelity(ZERO, PLUS) == pytest.approx(0.5, abs=1e-12)


@settings(max_examples=30)
@given(seeds)
def test_fuchs_van_de_graaf(seed):
    rng = np.random.default_rng(seed)
    rho, sigma = random_density_matrix(2, rng), random_density_matrix(2, rng)
    f, t = fidelity(rho, sigma), trace_distance(rho, sigma) / 2
    assert 1 - math.sqrt(f) <= t + 1e-9
    assert t <= math.sqrt(max(0.0, 1 - f)) + 1e-9


def test_relative_entropy_examples():
    rho = random_density_matrix(2, np.random.default_rng(2))
    assert relative_entropy(rho, rho) == pytest.approx(0.0, abs=1e-10)
    assert relative_entropy(ZERO, MIXED) == pytest.approx(1.0, abs=1e-12)
    assert relative_entropy(ZERO, ONE) == math.inf


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        trace_distance(ZERO, DensityMatrix.maximally_mixed(3))
    with pytest.raises(DimensionError):
        apply_channel(KrausChannel.identity(3), ZERO)


def test_channel_examples():
    rho = random_density_matrix(2, np.random.default_rng(3))
    np.testing.assert_allclose(apply_channel(KrausChannel.identity(2), rho).entries, rho.entries)
    np.testing.assert_allclose(apply_channel(FULL_DEPOL, rho).entries, np.eye(2) / 2, atol=1e-14)
    out = apply_channel(KrausChannel.depolarizing(0.5), ZERO)
    np.testing.assert_allclose(out.entries, np.diag([0.75, 0.25]), atol=1e-14)


def test_channel_rejects_incomplete_kraus():
    with pytest.raises(ValidationError):
        KrausChannel([np.diag([1.0, 0.5])])
    assert completeness_residual([np.eye(2)]) == pytest.approx(0.0)


def test_channel_composition_and_serialisation():
    rng = np.random.default_rng(4)
    a, b = random_channel(2, rng), random_channel(2, rng)
    rho = random_density_matrix(2, rng)
    np.testing.assert_allclose(apply_channel(a.then(b), rho).entries,
                               apply_channel(b, apply_channel(a, rho)).entries, atol=1e-12)
    back = KrausChannel.from_dict(json.loads(json.dumps(a.to_dict())))
    np.testing.assert_allclose(apply_channel(back, rho).entries, apply_channel(a, rho).entries, atol=1e-14)


def test_dpi_examples():
    rng = np.random.default_rng(5)
    rho, sigma = random_density_matrix(2, rng), random_density_matrix(2, rng)
    assert check_dpi(FULL_DEPOL, rho, sigma) == pytest.approx(relative_entropy(rho, sigma), abs=1e-10)
    assert check_dpi(KrausChannel.identity(2), rho, sigma) == pytest.approx(0.0, abs=1e-12)
    assert check_dpi(FULL_DEPOL, ZERO, ONE) == math.inf


def test_contractivity_examples():
    rng = np.random.default_rng(6)
    rho, sigma = random_density_matrix(2, rng), random_density_matrix(2, rng)
    assert check_contractivity(KrausChannel.identity(2), rho, sigma) == pytest.approx(0.0, abs=1e-12)
    assert check_contractivity(FULL_DEPOL, rho, sigma) == pytest.approx(trace_distance(rho, sigma), abs=1e-12)


@settings(max_examples=40)
@given(seeds)
def test_cptp_residuals_non_negative(seed):
    rng = np.random.default_rng(seed)
    phi = random_channel(2, rng)
    rho, sigma = random_density_matrix(2, rng), random_density_matrix(2, rng)
    assert check_dpi(phi, rho, sigma) >= -1e-10
    assert check_contractivity(phi, rho, sigma) >= -1e-10


def test_random_channel_is_trace_preserving():
    phi = random_channel(2, np.random.default_rng(7), dim_out=3)
    assert completeness_residual(phi.kraus_ops) < 1e-12
    out = apply_channel(phi, random_density_matrix(2, np.random.default_rng(8)))
    assert out.dim == 3 and np.trace(out.entries).real == pytest.approx(1.0)


def test_tensor_examples():
    np.testing.assert_allclose(tensor(MIXED, MIXED).entries, np.eye(4) / 4)
    prod = tensor(PLUS, random_pure_state(2, np.random.default_rng(9)))
    assert prod.dim == 4
    assert von_neumann_entropy(prod) == pytest.approx(0.0, abs=1e-10)
