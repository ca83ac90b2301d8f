import numpy as np
import pytest

from quantum.cvkit.exceptions import DimensionError, ParameterError
from quantum.cvkit.heterodyne import estimator_f, sample_husimi_product
from quantum.cvkit.mverify import (
    bs_witness,
    photon_estimator,
    postprocess_samples,
    product_fidelity_bounds,
    required_copies,
    vacuum_estimator,
    witness_failure,
)
from quantum.cvkit.progmeas import hadamard_walsh
from quantum.cvkit.types import SampleBatch


def test_postprocess_undoes_interferometer_and_translation(rng, haar):
    u = haar(3)
    beta = np.array([0.3, -0.2j, 1.0])
    alpha = rng.normal(size=(50, 3)) + 1j * rng.normal(size=(50, 3))
    batch = SampleBatch(alpha @ u.T + beta, seed=4)
    reduced = postprocess_samples(batch, u, beta)
    np.testing.assert_allclose(reduced.samples, alpha, atol=1e-12)
    assert reduced.seed == 4
    assert reduced.metadata['postprocessed']


def test_postprocess_dimension_checks(haar):
    u = haar(3)
    with pytest.raises(DimensionError):
        postprocess_samples(SampleBatch(np.zeros((4, 2), dtype=complex)), u)
    with pytest.raises(DimensionError):
        postprocess_samples(SampleBatch(np.zeros((4, 3), dtype=complex)), u, [0, 0])


def test_product_fidelity_bounds():
    lower, upper = product_fidelity_bounds([0.9, 0.8])
    assert lower == pytest.approx(0.7)
    assert upper == pytest.approx(0.72)
    lower, upper = product_fidelity_bounds([0.2, 0.3])
    assert lower == 0.0
    assert upper == pytest.approx(0.06)
    with pytest.raises(ParameterError):
        product_fidelity_bounds([1.2])


@pytest.mark.parametrize('eta', [0.05, 0.3, 0.6])
def test_single_mode_estimators_agree_with_general_estimator(rng, eta):
    z = rng.normal(size=200) + 1j * rng.normal(size=200)
    p0 = np.diag([1.0, 0.0]).astype(complex)
    p1 = np.diag([0.0, 1.0]).astype(complex)
    np.testing.assert_allclose(vacuum_estimator(z, eta), estimator_f(p0, eta, z).real)
    np.testing.assert_allclose(photon_estimator(z, eta), estimator_f(p1, eta, z).real)


def test_single_mode_estimators_reject_large_eta():
    with pytest.raises(ParameterError):
        vacuum_estimator(0.1, 0.7)
    with pytest.raises(ParameterError):
        photon_estimator(0.1, 0.0)


def test_witness_failure_terms():
    assert witness_failure(1e3, 4, 4, 0.3) == pytest.approx(8.0, rel=1e-6)
    assert witness_failure(1e30, 4, 2, 0.3) == pytest.approx(0.0, abs=1e-12)
    assert witness_failure(1e5, 4, 2, 0.3) > witness_failure(1e9, 4, 2, 0.3)


def test_required_copies():
    n = required_copies(4, 2, 0.3, 0.05)
    assert witness_failure(n, 4, 2, 0.3) <= 0.05 * (1 + 1e-6)
    assert witness_failure(0.99 * n, 4, 2, 0.3) > 0.05
    with pytest.raises(ParameterError):
        required_copies(4, 2, 0.3, 1.0)


def test_required_copies_scaling_in_modes():
    ratio = required_copies(200, 2, 0.3, 0.05) / required_copies(100, 2, 0.3, 0.05)
    assert 17 < ratio < 19


def _ideal_samples(inputs, count, seed):
    return sample_husimi_product(inputs, count, seed, unitary=hadamard_walsh(2))


@pytest.fixture
def four_mode_inputs(single_photon, vacuum_state):
    return [single_photon, single_photon, vacuum_state, vacuum_state]


def test_witness_accepts_ideal_output(four_mode_inputs):
    batch = _ideal_samples(four_mode_inputs, 100000, 101)
    report = bs_witness(batch, hadamard_walsh(2), 2, 0.3)
    assert report.samples == 100000
    assert len(report.fidelities) == 4
    assert report.slack == 0.3
    assert report.witness == pytest.approx(1.0, abs=0.3)
    assert report.accepted


def test_witness_rejects_lost_photon(single_photon, vacuum_state):
    inputs = [single_photon, vacuum_state, vacuum_state, vacuum_state]
    batch = _ideal_samples(inputs, 100000, 102)
    report = bs_witness(batch, hadamard_walsh(2), 2, 0.3)
    assert report.witness == pytest.approx(0.0, abs=0.3)
    assert not report.accepted


def test_witness_with_explicit_input_modes(single_photon, vacuum_state):
    inputs = [vacuum_state, single_photon, vacuum_state, single_photon]
    batch = _ideal_samples(inputs, 100000, 103)
    report = bs_witness(batch, hadamard_walsh(2), 2, 0.3, input_modes=[3, 1])
    assert report.accepted


def test_witness_validation(four_mode_inputs):
    batch = _ideal_samples(four_mode_inputs, 10, 1)
    u = hadamard_walsh(2)
    with pytest.raises(ParameterError):
        bs_witness(batch, u, 5, 0.3)
    with pytest.raises(ParameterError):
        bs_witness(batch, u, 2, 1.0)
    with pytest.raises(ParameterError):
        bs_witness(batch, u, 2, 0.3, input_modes=[1, 1])
    with pytest.raises(ParameterError):
        bs_witness(batch, u, 2, 0.3, input_modes=[0, 4])


@pytest.mark.slow
def test_witness_over_seeds(four_mode_inputs, single_photon, vacuum_state):
    u = hadamard_walsh(2)
    corrupted = [single_photon, vacuum_state, vacuum_state, vacuum_state]
    accepted = rejected = 0
    for run in range(20):
        accepted += bs_witness(_ideal_samples(four_mode_inputs, 100000, run), u, 2, 0.3).accepted
        rejected += not bs_witness(_ideal_samples(corrupted, 100000, 20 + run), u, 2, 0.3).accepted
    assert accepted >= 18
    assert rejected >= 18
