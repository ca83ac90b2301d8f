import math
import warnings

import attr
import numpy as np
import pytest
from scipy.integrate import quad

from quantum.cvkit.exceptions import (
    ClampWarning,
    DimensionError,
    NotNormalizedError,
    ParameterError,
)
from quantum.cvkit.gaussian import coherent, vacuum
from quantum.cvkit.heterodyne import (
    EstimatorParams,
    VerificationBudget,
    certify_fidelity,
    estimator_bound,
    estimator_f,
    laguerre2d,
    parameter_family,
    rank_witness,
    sample_husimi,
    sample_husimi_product,
    tomo_estimate,
    tomo_failure,
    tomo_sample_count,
    verification_bounds,
    wigner_point,
)
from quantum.cvkit.types import ConfidenceValue, FockVector, SampleBatch


def _projector(n: int) -> np.ndarray:
    a = np.zeros((n + 1, n + 1), dtype=complex)
    a[n, n] = 1.0
    return a


def _fock_expectation(operator, eta: float, photons: int) -> float:
    # radial Husimi integral for a Fock state and a diagonal operator
    def integrand(r):
        q = math.exp(-r * r) * r ** (2 * photons) / (math.pi * math.factorial(photons))
        return 2 * math.pi * r * q * estimator_f(operator, eta, complex(r)).real
    value, _ = quad(integrand, 0, np.inf, limit=200)
    return value


@pytest.mark.parametrize('eta', [0.1, 0.3, 0.5])
def test_estimator_expectations_match_closed_forms(eta):
    assert _fock_expectation(_projector(0), eta, 0) == pytest.approx(1.0, abs=1e-6)
    assert _fock_expectation(_projector(0), eta, 1) == pytest.approx(eta, abs=1e-6)
    assert _fock_expectation(_projector(1), eta, 0) == pytest.approx(0.0, abs=1e-6)
    assert _fock_expectation(_projector(1), eta, 1) == pytest.approx(1.0, abs=1e-6)
    assert _fock_expectation(_projector(1), eta, 2) == pytest.approx(2 * eta, abs=1e-6)


def test_laguerre2d_small_orders():
    z = 0.7 - 0.4j
    assert laguerre2d(0, 0, z) == pytest.approx(1.0)
    assert laguerre2d(0, 1, z) == pytest.approx(z)
    assert laguerre2d(1, 0, z) == pytest.approx(np.conj(z))
    assert laguerre2d(1, 1, z) == pytest.approx(abs(z) ** 2 - 1)
    assert laguerre2d(0, 2, z) == pytest.approx(z ** 2 / math.sqrt(2))
    with pytest.raises(ParameterError):
        laguerre2d(-1, 0, z)


def test_estimator_stays_below_uniform_bound(rng):
    eta = 0.4
    z = rng.normal(scale=3.0, size=5000) + 1j * rng.normal(scale=3.0, size=5000)
    for k in range(4):
        for l in range(4):  # noqa: E741
            a = np.zeros((4, 4), dtype=complex)
            a[k, l] = 1.0
            values = np.abs(estimator_f(a, eta, z))
            assert values.max() <= estimator_bound(k, l, eta) * (1 + 1e-9)


def test_estimator_rejects_bad_arguments():
    with pytest.raises(ParameterError):
        estimator_f(np.eye(2), 0.0, 0.1)
    with pytest.raises(ParameterError):
        estimator_f(_projector(4), 0.5, 0.1)
    with pytest.raises(ParameterError):
        estimator_f(np.eye(3), 1.0, 0.1)
    assert isinstance(estimator_f(np.eye(3), 0.99, 0.0), complex)
    assert estimator_f(_projector(0), 5.0, 0.0) == pytest.approx(0.2)
    with pytest.raises(ParameterError):
        estimator_bound(1, 1, 0.6)
    with pytest.raises(ParameterError):
        estimator_bound(0, 0, 0.0)
    assert estimator_bound(0, 0, 0.5) == pytest.approx(2.0)
    with pytest.raises(DimensionError):
        estimator_f(np.ones((2, 3)), 0.5, 0.1)


def test_estimator_params_validation():
    p = EstimatorParams(0.2, 1)
    assert p.eps == 0.1 and p.copies == 1
    EstimatorParams(1.5, 0)
    with pytest.raises(ParameterError):
        EstimatorParams(1.0, 2)
    with pytest.raises(ParameterError):
        EstimatorParams(0.0, 1)
    with pytest.raises(ParameterError):
        EstimatorParams(0.2, 1, eps=0.0)
    with pytest.raises(ParameterError):
        EstimatorParams(0.2, 1, copies=0)


def test_husimi_sampling_is_reproducible(single_photon):
    a = sample_husimi(single_photon, 500, seed=11)
    b = sample_husimi(single_photon, 500, seed=11)
    np.testing.assert_array_equal(a.samples, b.samples)
    assert a.seed == 11
    assert a.metadata['state'] == 'fock'
    assert a.count == 500 and a.modes == 1


def test_husimi_sampling_moments(single_photon):
    batch = sample_husimi(single_photon, 20000, seed=3)
    z = batch.samples
    # Q of |1⟩ is Gamma(2, 1) in |z|²
    assert np.mean(np.abs(z) ** 2) == pytest.approx(2.0, abs=0.05)
    assert abs(np.mean(z)) < 0.03
    assert np.mean(np.abs(z) ** 2 > 1) == pytest.approx(2 / math.e, abs=0.015)


def test_gaussian_sampling_moments():
    alpha = 1.0 + 0.5j
    batch = sample_husimi(coherent([alpha]), 20000, seed=5)
    assert batch.metadata['state'] == 'gaussian'
    z = batch.as_matrix()[:, 0]
    assert np.mean(z) == pytest.approx(alpha, abs=0.02)
    assert np.var(z.real) == pytest.approx(0.5, abs=0.02)
    assert np.var(z.imag) == pytest.approx(0.5, abs=0.02)
    two = sample_husimi(vacuum(2), 100, seed=5)
    assert two.as_matrix().shape == (100, 2)


def test_sampling_rejects_unnormalized_state():
    with pytest.raises(NotNormalizedError):
        sample_husimi(FockVector(1, 1, {(1,): 2.0}), 10, seed=1)
    with pytest.raises(ParameterError):
        sample_husimi(FockVector(1, 1, {(1,): 1.0}), -1, seed=1)


def test_product_sampling_through_interferometer(single_photon, vacuum_state, balanced_splitter):
    plain = sample_husimi_product([single_photon, vacuum_state], 300, seed=9)
    mixed = sample_husimi_product([single_photon, vacuum_state], 300, seed=9, unitary=balanced_splitter)
    np.testing.assert_allclose(mixed.samples, plain.samples @ balanced_splitter.T)
    assert mixed.metadata['modes'] == 2
    with pytest.raises(DimensionError):
        sample_husimi_product([single_photon], 10, seed=1, unitary=balanced_splitter)
    with pytest.raises(ParameterError):
        sample_husimi_product([], 10, seed=1)


def _plus_state() -> FockVector:
    return FockVector(1, 1, {(0,): 1 / math.sqrt(2), (1,): 1 / math.sqrt(2)})


def test_tomography_single_run():
    batch = sample_husimi(_plus_state(), 100000, seed=17)
    result = tomo_estimate(batch, 1, 0.2, 0.2)
    assert result.bound == pytest.approx(0.4)
    assert result.samples == 100000
    np.testing.assert_allclose(result.matrix, result.matrix.conj().T)
    assert np.max(np.abs(result.matrix - 0.5)) <= result.bound
    entry = result.entry(0, 1)
    assert isinstance(entry, ConfidenceValue)
    assert entry.contains(0.5)
    assert len(result.entries()) == 2


@pytest.mark.slow
def test_tomography_within_bound_over_seeds():
    within = 0
    for seed in range(40):
        batch = sample_husimi(_plus_state(), 100000, seed=seed)
        result = tomo_estimate(batch, 1, 0.2, 0.2)
        within += bool(np.max(np.abs(result.matrix - 0.5)) <= result.bound)
    assert within >= 38


def test_tomography_rejects_multimode_samples():
    batch = SampleBatch(np.zeros((10, 2), dtype=complex))
    with pytest.raises(DimensionError):
        tomo_estimate(batch, 1, 0.2, 0.2)
    with pytest.raises(ParameterError):
        tomo_estimate(SampleBatch(np.zeros(10, dtype=complex)), 1, 1.5, 0.2)


def test_tomography_sample_count():
    n = tomo_sample_count(1, 0.5, 0.5, 0.05)
    assert tomo_failure(n, 1, 0.5, 0.5) <= 0.05
    assert tomo_failure(n - 1, 1, 0.5, 0.5) > 0.05
    assert tomo_sample_count(1, 0.5, 0.5, 0.01) >= n
    assert tomo_sample_count(2, 0.5, 0.5, 0.05) >= n
    assert tomo_failure(1, 1, 0.5, 0.5) == 1.0


def test_certify_single_photon(single_photon):
    batch = sample_husimi(single_photon, 20000, seed=21)
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', ClampWarning)
        fidelity, outside, p_support = certify_fidelity(batch, single_photon, 1, 1, 1, 0.4, 0.1)
    assert fidelity.value >= 0.9
    assert fidelity.bound == pytest.approx(0.5)
    assert outside / batch.count == pytest.approx(2 / math.e, abs=0.015)
    assert 0 < p_support < 1


def test_certify_flags_wrong_state(single_photon, vacuum_state):
    batch = sample_husimi(vacuum_state, 50000, seed=22)
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', ClampWarning)
        fidelity, _, _ = certify_fidelity(batch, single_photon, 1, 1, 1, 0.4, 0.1)
    assert fidelity.value <= 0.1


def test_certify_clamps_with_warning(single_photon):
    # few samples from a heavy-tailed estimator leave [0, 1]
    batch = SampleBatch(np.array([0.3 + 0j] * 5))
    with pytest.warns(ClampWarning):
        fidelity, _, _ = certify_fidelity(batch, single_photon, 1, 1, 1, 0.4, 0.1)
    assert fidelity.clamped
    assert 0.0 <= fidelity.value <= 1.0


def test_certify_checks_target(single_photon):
    batch = SampleBatch(np.array([0.3 + 0j] * 5))
    with pytest.raises(NotNormalizedError):
        certify_fidelity(batch, FockVector(1, 1, {(1,): 2.0}), 1, 1, 1, 0.4, 0.1)
    with pytest.raises(ParameterError):
        certify_fidelity(batch, single_photon, 1, 0, 1, 0.4, 0.1)


def test_verification_family_choice_term_decreases():
    choice = []
    for m in (2, 3, 4):
        bounds = verification_bounds(parameter_family(m, 0, 1), 1.0)
        choice.append(bounds.p_choice)
    assert choice[0] > choice[1] > choice[2]


def test_verification_family_vanishes_for_many_copies():
    bounds = verification_bounds(parameter_family(8000, 0, 1), 1.0)
    assert bounds.p_support < 1e-3
    assert bounds.p_definetti < 1e-3
    assert bounds.p_choice < 1e-3
    assert bounds.p_hoeffding < 1e-3
    assert bounds.failure < 1e-3


def test_verification_bounds_validation():
    good = VerificationBudget(
        samples=1e6, copies=2, cutoff=0, support=1, k=1e6, q=10, eps=0.1, eps_prime=0.1,
    )
    assert verification_bounds(good, 1.0).failure <= 1.0
    with pytest.raises(ParameterError):
        attr.evolve(good, q=good.samples)
    with pytest.raises(ParameterError):
        parameter_family(1, 0, 1)


@pytest.mark.parametrize('change', [
    {'q': 0},
    {'q': 1},
    {'k': 0},
    {'support': 2e6},
    {'q': 1.25e5},
    {'samples': 80},
    {'eps': 0.0},
])
def test_verification_budget_invariants(change):
    values = dict(samples=1e6, copies=2, cutoff=0, support=1, k=1e6, q=10, eps=0.1, eps_prime=0.1)
    values.update(change)
    with pytest.raises(ParameterError):
        VerificationBudget(**values)


def test_wigner_of_vacuum_at_origin(vacuum_state):
    batch = sample_husimi(vacuum_state, 20000, seed=31)
    value = wigner_point(batch, 0j, 0.2, 2)
    assert value.contains(2 / math.pi)
    assert value.failure == 0.05
    with pytest.raises(ParameterError):
        wigner_point(batch, 0j, 1.5, 2)


def test_wigner_of_single_photon_is_negative(single_photon):
    batch = sample_husimi(single_photon, 50000, seed=37)
    value = wigner_point(batch, 0j, 0.2, 2)
    # smoothing shifts the mean to −(1 − η)
    assert value.value == pytest.approx(-0.8 * 2 / math.pi, abs=0.15)
    assert value.value < 0
    assert value.contains(-2 / math.pi)


def test_rank_witness():
    profile = [math.sqrt(1 - 0.4779)]
    assert rank_witness(ConfidenceValue(0.6, 0.05, 0.01), profile) == 1
    assert rank_witness(ConfidenceValue(0.5, 0.05, 0.01), profile) == 0
    assert rank_witness(ConfidenceValue(0.98, 0.01, 0.01), [0.9, 0.5, 0.2]) == 3
    assert rank_witness(ConfidenceValue(0.9, 0.01, 0.01), [0.9, 0.5, 0.2]) == 2
    with pytest.raises(ParameterError):
        rank_witness(ConfidenceValue(0.6, 0.05, 0.01), [0.2, 0.5])
