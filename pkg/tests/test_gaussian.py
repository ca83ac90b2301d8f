import math

import numpy as np
import pytest
from scipy.stats import ortho_group

from quantum.cvkit.exceptions import ClampWarning, DimensionError, NegativeDensityError, ParameterError
from quantum.cvkit.fock import apply_interferometer_fock, gaussian_unitary_matrix
from quantum.cvkit.gaussian import (
    CvsCircuit,
    Displace,
    GaussianCircuit,
    Passive,
    Squeeze,
    coherent,
    cvs_origin_density,
    embed_orthogonal,
    evolve,
    gcore_density,
    husimi_gaussian,
    inverse_elements,
    vacuum,
)
from quantum.cvkit.matfun import hafnian_exact, permanent_exact
from quantum.cvkit.types import FockVector


def _coherent_bra(beta: complex, size: int) -> np.ndarray:
    n = np.arange(size)
    fact = np.array([math.sqrt(math.factorial(k)) for k in n])
    return math.exp(-abs(beta) ** 2 / 2) * np.conj(beta) ** n / fact


def _single_mode_husimi(psi: np.ndarray, beta: complex) -> float:
    return abs(_coherent_bra(beta, psi.size) @ psi) ** 2 / math.pi


def test_vacuum_and_coherent_husimi():
    assert husimi_gaussian(vacuum(1), [0]) == pytest.approx(1 / math.pi)
    q = husimi_gaussian(coherent([0.5 + 0.2j]), [0.1 - 0.3j])
    assert q == pytest.approx(math.exp(-abs(0.4 + 0.5j) ** 2) / math.pi)


def test_evolve_inverse_roundtrip(haar):
    elements = [Squeeze([0.3, 0.1j]), Passive(haar(2)), Displace([0.2, -0.4j])]
    start = coherent([0.3, 0.7j])
    back = evolve(evolve(start, elements), inverse_elements(elements))
    assert np.allclose(back.covariance, start.covariance, atol=1e-10)
    assert np.allclose(back.displacement, start.displacement, atol=1e-10)


@pytest.mark.parametrize('xi,alpha,core', [
    (0.0, 0.0, [0.0, 1.0]),
    (0.0, 0.6 - 0.2j, [1.0]),
    (0.4 * np.exp(0.3j), 0.0, [1.0]),
    (0.35 * np.exp(-1.1j), 0.25 + 0.4j, [0.6, 0.0, 0.8]),
    (0.2, -0.3j, [0.6, 0.8j]),
])
def test_single_mode_density_matches_fock_oracle(xi, alpha, core):
    coeffs = np.asarray(core, dtype=complex)
    state = FockVector(1, len(core) - 1, {(k,): c for k, c in enumerate(coeffs) if c != 0})
    circuit = GaussianCircuit(1, [Displace(alpha), Squeeze(xi)])
    psi = gaussian_unitary_matrix(xi, alpha, 80, coeffs.size) @ coeffs
    for beta in (0.0, 0.3 + 0.1j, -0.7 + 0.5j, 1.1j):
        expected = _single_mode_husimi(psi, beta)
        assert gcore_density(circuit, state, [beta]) == pytest.approx(expected, abs=1e-6)


def test_two_mode_passive_density(haar):
    u = haar(2)
    core = FockVector(2, 2, {(1, 0): 0.6, (1, 1): 0.8})
    out = apply_interferometer_fock(u, core)
    circuit = GaussianCircuit(2, [Passive(u)])
    for point in ([0.2, 0.1j], [0.5 - 0.3j, -0.4]):
        amp = sum(
            v * np.prod([_coherent_bra(b, n + 1)[n] for b, n in zip(point, occ)])
            for occ, v in out.amplitudes.items()
        )
        expected = abs(amp) ** 2 / math.pi ** 2
        assert gcore_density(circuit, core, point) == pytest.approx(expected, abs=1e-6)


def test_density_dimension_checks():
    core = FockVector(1, 1, {(1,): 1.0})
    with pytest.raises(DimensionError):
        gcore_density(GaussianCircuit(1, []), core, [0.0, 0.0])


def test_negative_density_raises(mocker):
    core = FockVector(1, 1, {(1,): 1.0})
    mocker.patch('quantum.cvkit.gaussian.loop_hafnian_exact', return_value=-1.0)
    with pytest.raises(NegativeDensityError) as exc_info:
        gcore_density(GaussianCircuit(1, []), core, [0.0])
    assert exc_info.value.value < 0


def test_rounding_negativity_is_clamped(mocker):
    core = FockVector(1, 1, {(1,): 1.0})
    mocker.patch('quantum.cvkit.gaussian.loop_hafnian_exact', return_value=-1e-12)
    with pytest.warns(ClampWarning):
        assert gcore_density(GaussianCircuit(1, []), core, [0.0]) == 0.0


@pytest.fixture
def cvs():
    sigma = np.array([[0.0, 1.0], [1.0, 0.0]])
    return CvsCircuit(2, 1, 0.3, 0.4, 0.7, sigma, np.eye(2))


def test_cvs_matches_general_density(cvs):
    expected = gcore_density(cvs.circuit(), cvs.core(), [0.0, 0.0])
    assert cvs_origin_density(cvs) == pytest.approx(expected, abs=1e-6)


def test_cvs_orthogonal_invariance(cvs):
    o = ortho_group.rvs(2, random_state=5)
    rotated = CvsCircuit(2, 1, cvs.xi, cvs.zeta, cvs.phi, cvs.sigma, o)
    assert cvs_origin_density(rotated) == pytest.approx(cvs_origin_density(cvs), abs=1e-10)


def test_cvs_validation():
    with pytest.raises(ParameterError):
        CvsCircuit(2, 2, 0.1, 0.1, 0.1, np.eye(2), np.eye(2))


def test_embed_orthogonal(rng):
    x = rng.normal(size=(2, 2))
    nu = 0.9 / np.linalg.norm(x, 2)
    sigma = embed_orthogonal(x, 9, nu)
    assert sigma.shape == (9, 9)
    assert np.allclose(sigma, sigma.T, atol=1e-10)
    assert np.allclose(sigma @ sigma.T, np.eye(9), atol=1e-9)
    assert hafnian_exact(sigma[:4, :4]) == pytest.approx(nu ** 2 * permanent_exact(x), abs=1e-10)


def test_embed_orthogonal_rejects_large_norm():
    with pytest.raises(ParameterError):
        embed_orthogonal(np.array([[2.0]]), 4, 1.0)
    with pytest.raises(ParameterError):
        embed_orthogonal(np.eye(2), 6, 0.5)
