import math

import numpy as np
import pytest

from quantum.cvkit.exceptions import DimensionError, ParameterError
from quantum.cvkit.fock import enumerate_sector
from quantum.cvkit.progmeas import (
    coherent_no_click,
    coherent_scheme_stats,
    distinguishability_probs,
    group_interferometer,
    hadamard_walsh,
    imperfect_beam_splitter,
    imperfect_merger,
    looped_merger_no_click,
    merger_imperfect,
    merger_interferometer,
    parity_postprocess,
    pi_statistic,
    sign_matrix,
    swap_test_stats,
)
from quantum.cvkit.utils import unitarity_deviation


def test_swap_test_acceptance():
    assert swap_test_stats(4, 0.5) == pytest.approx(0.625)
    assert swap_test_stats(2, 1.0) == pytest.approx(1.0)
    assert swap_test_stats(3, 0.0) == pytest.approx(1 / 3)
    with pytest.raises(ParameterError):
        swap_test_stats(1, 0.5)
    with pytest.raises(ParameterError):
        swap_test_stats(4, 1.5)


def test_sign_matrix():
    s = sign_matrix(2)
    assert s.shape == (4, 4)
    np.testing.assert_array_equal(s @ s.T, 4 * np.eye(4))
    assert unitarity_deviation(hadamard_walsh(3)) < 1e-12
    with pytest.raises(ParameterError):
        sign_matrix(-1)


def test_group_interferometer():
    u = group_interferometer([2, 4])
    assert u.shape == (8, 8)
    assert unitarity_deviation(u) < 1e-12
    with pytest.raises(ParameterError):
        group_interferometer([2, 3])
    with pytest.raises(ParameterError):
        group_interferometer([1])


def test_hadamard_test_four_modes():
    signs = sign_matrix(2)
    u = hadamard_walsh(2)
    accepted_i = accepted_d = 0.0
    for d in enumerate_sector(4, 4):
        pr_i, pr_d = distinguishability_probs(u, d)
        accepted = parity_postprocess(signs, d) == 0
        assert accepted == (abs(pi_statistic(signs, d) - 4) < 1e-9)
        if accepted:
            accepted_i += pr_i
            accepted_d += pr_d
        else:
            assert pr_i == pytest.approx(0.0, abs=1e-12)
    assert accepted_i == pytest.approx(1.0)
    assert accepted_d == pytest.approx(0.25)
    assert parity_postprocess(signs, (2, 1, 1, 0)) == 1


def test_distinguishability_sums_to_one(haar):
    u = haar(3)
    totals = np.zeros(2)
    for d in enumerate_sector(3, 3):
        totals += distinguishability_probs(u, d)
    np.testing.assert_allclose(totals, [1.0, 1.0])


def test_distinguishability_balanced_splitter(balanced_splitter):
    pr_i, pr_d = distinguishability_probs(balanced_splitter, (1, 1))
    assert pr_i == pytest.approx(0.0, abs=1e-12)
    assert pr_d == pytest.approx(0.5)
    with pytest.raises(DimensionError):
        distinguishability_probs(balanced_splitter, (1, 0))


def test_cyclic_group_suppression():
    u = group_interferometer([3])
    signs = u * math.sqrt(3)
    accepted = 0.0
    for d in enumerate_sector(3, 3):
        pi = pi_statistic(signs, d)
        if abs(pi - 3) < 1e-9:
            accepted += distinguishability_probs(u, d)[0]
    assert accepted == pytest.approx(1.0)


def test_parity_rejects_non_power_of_two():
    with pytest.raises(ParameterError):
        parity_postprocess(np.ones((3, 3)), (1, 1, 1))


def test_coherent_scheme_stats():
    p, single, coherent = coherent_scheme_stats(4, 0.5)
    assert p == pytest.approx(0.5 ** 0.75)
    assert single == pytest.approx(0.25)
    assert coherent == pytest.approx(27 / 256)


@pytest.mark.parametrize('m', [2, 4, 8])
def test_merger_no_click_matches_overlap(m):
    alpha, beta = 0.8 + 0.3j, 0.2 - 0.5j
    x = math.exp(-abs(alpha - beta) ** 2)
    rounds = int(math.log2(m))
    u = merger_interferometer(m)
    assert unitarity_deviation(u) < 1e-12
    detected = [1 << k for k in range(rounds)]
    merged = coherent_no_click(u, [alpha] + [beta] * (m - 1), detected)
    assert merged == pytest.approx(x ** (1 - 1 / m))
    assert looped_merger_no_click(alpha, beta, rounds) == pytest.approx(merged)
    assert coherent_scheme_stats(m, x)[0] == pytest.approx(merged)


def test_merger_rejects_bad_orders():
    with pytest.raises(ParameterError):
        merger_interferometer(6)
    with pytest.raises(ParameterError):
        merger_interferometer(1)
    with pytest.raises(ParameterError):
        looped_merger_no_click(1.0, 0.5, 0)
    with pytest.raises(DimensionError):
        coherent_no_click(np.eye(2), [1.0], [1])


def test_imperfect_splitter_is_not_unitary():
    assert unitarity_deviation(imperfect_beam_splitter(1.0)) < 1e-12
    assert unitarity_deviation(imperfect_beam_splitter(0.9)) > 1e-3
    with pytest.raises(ParameterError):
        imperfect_beam_splitter(1.2)


def test_imperfect_merger_ordering():
    c2, c4, s2, s4 = merger_imperfect(1.0, 0.5, 0.988, 0.9)
    assert s2 <= s4
    assert c4 <= c2
    _, c4_ideal, _, _ = merger_imperfect(1.0, 0.5, 1.0, 0.9)
    assert c4_ideal == pytest.approx(1.0)


@pytest.mark.parametrize('nu', [0.9, 0.988, 1.0])
def test_imperfect_merger_matches_propagation(nu):
    alpha, eta = 0.7 + 0.2j, 0.9
    c2, c4, _, _ = merger_imperfect(alpha, alpha, nu, eta)
    direct4 = coherent_no_click(imperfect_merger(nu), [alpha] * 4, [1, 2], eta)
    direct2 = coherent_no_click(imperfect_beam_splitter(nu), [alpha] * 2, [1], eta)
    assert c4 == pytest.approx(direct4)
    assert c2 == pytest.approx(direct2)


def test_imperfect_two_mode_soundness_matches_propagation():
    alpha, beta, nu, eta = 1.0 + 0.2j, 0.4 - 0.1j, 0.95, 0.8
    _, _, s2, _ = merger_imperfect(alpha, beta, nu, eta)
    direct = coherent_no_click(imperfect_beam_splitter(nu), [alpha, beta], [1], eta)
    assert s2 == pytest.approx(1 - direct)


def test_four_mode_merger_is_at_least_as_sound(rng):
    for _ in range(1000):
        nu, eta = rng.uniform(0.0, 1.0, size=2)
        alpha, beta = rng.normal(size=2) + 1j * rng.normal(size=2)
        _, _, s2, s4 = merger_imperfect(alpha, beta, nu, eta)
        assert s2 <= s4 + 1e-12
