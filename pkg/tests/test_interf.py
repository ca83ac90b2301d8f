import numpy as np
import pytest

from quantum.cvkit.exceptions import DimensionError, NotUnitaryError, ParameterError
from quantum.cvkit.fock import apply_interferometer_fock, enumerate_sector, fock_state
from quantum.cvkit.interf import (
    AdaptiveCircuit,
    TableStages,
    adaptive_final_probability,
    adaptive_overlap,
    bs_distribution,
    bs_probability,
    bs_sample,
    lift_unitary,
)
from quantum.cvkit.types import FockVector


def test_hong_ou_mandel(balanced_splitter):
    assert bs_probability(balanced_splitter, (1, 1), (1, 1)) == pytest.approx(0.0, abs=1e-15)
    assert bs_probability(balanced_splitter, (1, 1), (2, 0)) == pytest.approx(0.5)
    assert bs_probability(balanced_splitter, (1, 1), (1, 0)) == 0.0


def test_probability_matches_fock_evolution(haar):
    u = haar(3)
    evolved = apply_interferometer_fock(u, fock_state((1, 1, 0)))
    for out in enumerate_sector(3, 2):
        expected = abs(evolved.amplitude(out)) ** 2
        assert bs_probability(u, (1, 1, 0), out) == pytest.approx(expected, abs=1e-12)


def test_distribution_normalized(haar):
    outcomes, probs = bs_distribution(haar(4), (1, 0, 2, 0))
    assert len(outcomes) == 35
    assert probs.sum() == pytest.approx(1.0, abs=1e-10)


def test_probability_validation(haar):
    with pytest.raises(DimensionError):
        bs_probability(haar(3), (1, 1), (1, 1))
    with pytest.raises(ParameterError):
        bs_probability(haar(2), (-1, 1), (0, 0))
    with pytest.raises(NotUnitaryError):
        bs_probability(np.ones((2, 2)), (1, 0), (1, 0))


def test_sampler_reproducible(haar):
    u = haar(3)
    a = bs_sample(u, (1, 1, 0), 500, seed=11)
    b = bs_sample(u, (1, 1, 0), 500, seed=11)
    assert a.shape == (500, 3)
    assert np.array_equal(a, b)
    assert np.all(a.sum(axis=1) == 2)


def test_sampler_frequencies(haar):
    u = haar(3)
    outcomes, probs = bs_distribution(u, (1, 1, 0))
    drawn = bs_sample(u, (1, 1, 0), 40000, seed=3)
    for out, p in zip(outcomes, probs):
        freq = np.mean(np.all(drawn == np.array(out), axis=1))
        assert freq == pytest.approx(p, abs=0.015)


def test_lift_unitary(haar):
    u = haar(3)
    lifted = lift_unitary(u, 2)
    assert np.allclose(lifted.conj().T @ lifted, np.eye(6), atol=1e-10)
    basis = enumerate_sector(3, 2)
    col = basis.index((0, 1, 1))
    evolved = apply_interferometer_fock(u, fock_state((0, 1, 1)))
    for row, s in enumerate(basis):
        assert lifted[row, col] == pytest.approx(evolved.amplitude(s), abs=1e-12)


def _branch(circuit: AdaptiveCircuit, stages: TableStages, p: int) -> FockVector:
    state = apply_interferometer_fock(circuit.base_unitary, fock_state(circuit.input_state))
    reduced = {occ[1:]: amp for occ, amp in state.amplitudes.items() if occ[0] == p}
    return apply_interferometer_fock(stages((p,), 2), FockVector(2, 2, reduced))


@pytest.fixture
def adaptive(haar):
    stages = TableStages({(0,): haar(2), (1,): haar(2), (2,): haar(2)})
    return AdaptiveCircuit(3, 2, 1, haar(3), stages), stages


def test_adaptive_probability_matches_fock_oracle(adaptive):
    circuit, stages = adaptive
    total = 0.0
    for final in enumerate_sector(2, 0) + enumerate_sector(2, 1) + enumerate_sector(2, 2):
        expected = sum(abs(_branch(circuit, stages, p).amplitude(final)) ** 2 for p in range(3))
        value = adaptive_final_probability(circuit, final)
        assert value == pytest.approx(expected, abs=1e-9)
        total += value
    assert total == pytest.approx(1.0, abs=1e-9)


def test_adaptive_overlap_matches_fock_oracle(adaptive, haar):
    circuit, stages = adaptive
    other_stages = TableStages({(1,): haar(2)})
    other = AdaptiveCircuit(3, 2, 1, circuit.base_unitary, other_stages)
    for p in range(3):
        mine = _branch(circuit, stages, p)
        overlap = adaptive_overlap(circuit, (p,), circuit, (p,))
        assert overlap == pytest.approx(mine.inner(mine), abs=1e-9)
    expected = _branch(circuit, stages, 1).inner(_branch(other, other_stages, 1))
    assert adaptive_overlap(circuit, (1,), other, (1,)) == pytest.approx(expected, abs=1e-9)
    assert adaptive_overlap(circuit, (0,), circuit, (1,)) == 0


def test_adaptive_validation(haar):
    with pytest.raises(ParameterError):
        AdaptiveCircuit(3, 4, 1, haar(3))
    with pytest.raises(DimensionError):
        AdaptiveCircuit(3, 2, 1, haar(2))
    circuit = AdaptiveCircuit(3, 2, 1, haar(3))
    with pytest.raises(DimensionError):
        circuit.unitary_for((1, 0))
