"""
Statistics of programmable projective measurements built from linear
optics: generalized swap tests, Hadamard and finite abelian group
interferometers with parity post-processing, and the coherent-state
Hadamard, merger and looped merger schemes with their imperfect variants.
"""

from __future__ import annotations

import functools
import logging
import math
from typing import (
    Sequence,
    Tuple,
)

import numpy as np

from .exceptions import DimensionError, ParameterError
from .interf import bs_amplitude
from .matfun import permanent_exact, repeat_matrix
from .types import Occupation
from .utils import check_unitary, direct_sum, multi_factorial

__all__ = (
    'swap_test_stats',
    'sign_matrix',
    'hadamard_walsh',
    'group_interferometer',
    'pi_statistic',
    'parity_postprocess',
    'distinguishability_probs',
    'coherent_scheme_stats',
    'merger_interferometer',
    'coherent_no_click',
    'looped_merger_no_click',
    'imperfect_beam_splitter',
    'imperfect_merger',
    'merger_imperfect',
)

log = logging.getLogger('quantum.cvkit.progmeas')


def _check_overlap(x: float) -> None:
    if not 0.0 <= x <= 1.0:
        raise ParameterError('squared overlap must lie in [0, 1]', x)


def _log2(m: int) -> int:
    if m < 1 or m & (m - 1):
        raise ParameterError('order must be a power of two', m)
    return m.bit_length() - 1


def swap_test_stats(m: int, overlap_sq: float) -> float:
    """Acceptance probability ``1/m + (m−1)x/m`` of the order-*m* swap test."""
    if m < 2:
        raise ParameterError('the swap test needs m ≥ 2', m)
    _check_overlap(overlap_sq)
    return 1.0 / m + (m - 1) * overlap_sq / m


@functools.lru_cache(maxsize=16)
def _sylvester(order: int) -> np.ndarray:
    if order == 0:
        return np.ones((1, 1), dtype=int)
    h = _sylvester(order - 1)
    return np.block([[h, h], [h, -h]])


def sign_matrix(order: int) -> np.ndarray:
    """The ±1 Sylvester matrix of size ``2^order``."""
    if order < 0:
        raise ParameterError('negative order', order)
    return _sylvester(order).copy()


def hadamard_walsh(order: int) -> np.ndarray:
    """The normalized Hadamard–Walsh interferometer ``H_n = S / √(2ⁿ)``."""
    s = sign_matrix(order)
    return s / math.sqrt(s.shape[0])


def _fourier(a: int) -> np.ndarray:
    j = np.arange(a)
    return np.exp(2j * math.pi * np.outer(j, j) / a)


def group_interferometer(factors: Sequence[int]) -> np.ndarray:
    """
    The interferometer ``⊗ F_{aᵢ} / √m`` of the abelian group
    ``Z_{a₁} × … × Z_{a_k}`` given by its invariant factors ``a₁ | a₂ | …``.
    """
    factors = [int(a) for a in factors]
    if not factors or any(a < 2 for a in factors):
        raise ParameterError('invariant factors must be at least 2', factors)
    for a, b in zip(factors, factors[1:]):
        if b % a:
            raise ParameterError('invariant factors must divide each other', factors)
    signs = functools.reduce(np.kron, (_fourier(a) for a in factors))
    return signs / math.sqrt(signs.shape[0])


def _occupation(d: Sequence[int], m: int) -> Occupation:
    d = tuple(int(v) for v in d)
    if len(d) != m or any(v < 0 for v in d):
        raise DimensionError('outcome length', m, len(d))
    return d


def pi_statistic(signs, d: Sequence[int]) -> complex:
    """``π(d) = Σᵢ Πⱼ s_ij^{d_j}`` for an unnormalized sign matrix."""
    s = np.asarray(signs, dtype=complex)
    d = _occupation(d, s.shape[1])
    return complex(np.sum(np.prod(s ** np.asarray(d), axis=1)))


def parity_postprocess(signs, d: Sequence[int]) -> int:
    """
    Accepts (returns 0) iff ``π(d) = m`` for the ±1 Sylvester matrix, using
    only the rows ``2^k``: each must hold an even number of −1 entries over
    the columns where ``d`` is odd.  Returns 1 on rejection.
    """
    s = np.sign(np.real(np.asarray(signs)))
    m = s.shape[0]
    n = _log2(m)
    d = _occupation(d, m)
    odd = np.flatnonzero(np.asarray(d) % 2)
    for k in range(n):
        negatives = int(np.count_nonzero(s[1 << k, odd] < 0))
        if negatives % 2:
            return 1
    return 0


def distinguishability_probs(unitary, d: Sequence[int]) -> Tuple[float, float]:
    """
    Outcome probabilities for ``m`` photons entering one per mode, when all
    are indistinguishable (``Pr_i``) and when the first is distinguishable
    from the rest (``Pr_d``).
    """
    u = check_unitary(unitary)
    m = u.shape[0]
    d = _occupation(d, m)
    if sum(d) != m:
        raise DimensionError('outcome must hold m photons', m, sum(d))
    ones = (1,) * m
    pr_i = abs(bs_amplitude(u, ones, d)) ** 2
    rest = (0,) + (1,) * (m - 1)
    pr_d = 0.0
    for k in range(m):
        if d[k] == 0:
            continue
        reduced = d[:k] + (d[k] - 1,) + d[k + 1:]
        sub = repeat_matrix(u, (reduced, rest))
        per = permanent_exact(sub, 'ryser' if sub.shape[0] > 3 else 'naive')
        pr_d += abs(u[k, 0]) ** 2 * abs(per) ** 2 / multi_factorial(reduced)
    return pr_i, pr_d


def coherent_scheme_stats(m: int, overlap_sq: float) -> Tuple[float, float, float]:
    """
    No-click probability ``x^{1−1/m}`` of the coherent-state Hadamard and
    merger schemes, with the single-photon and coherent-scheme gaps
    ``1/m`` and ``(m−1)^{m−1}/m^m``.
    """
    if m < 2:
        raise ParameterError('the scheme needs m ≥ 2', m)
    _check_overlap(overlap_sq)
    p = overlap_sq ** (1.0 - 1.0 / m)
    return p, 1.0 / m, (m - 1) ** (m - 1) / m ** m


def _merge(block: np.ndarray, splitter: np.ndarray) -> np.ndarray:
    half = block.shape[0]
    doubled = direct_sum(block, block)
    mix = np.eye(2 * half, dtype=complex)
    mix[np.ix_([0, half], [0, half])] = splitter
    return mix @ doubled


def merger_interferometer(m: int, splitter=None) -> np.ndarray:
    """
    ``U_m = H_{0,m/2}(U_{m/2} ⊕ U_{m/2})`` with ``U_2`` the splitter
    (balanced by default).  Detectors sit on the outputs ``2^k``.
    """
    n = _log2(m)
    if n == 0:
        raise ParameterError('the merger needs m ≥ 2', m)
    h = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2) if splitter is None \
        else np.asarray(splitter, dtype=complex)
    u = h
    for _ in range(n - 1):
        u = _merge(u, h)
    return u


def coherent_no_click(
    unitary, amplitudes: Sequence[complex], detected: Sequence[int], eta: float = 1.0,
) -> float:
    """
    Probability that none of the *detected* outputs clicks when the
    product coherent state *amplitudes* enters *unitary*.
    """
    u = np.asarray(unitary, dtype=complex)
    amps = np.asarray(amplitudes, dtype=complex)
    if u.shape[1] != amps.size:
        raise DimensionError('amplitude count', u.shape[1], amps.size)
    if not 0.0 <= eta <= 1.0:
        raise ParameterError('efficiency must lie in [0, 1]', eta)
    out = u @ amps
    return math.exp(-eta * float(np.sum(np.abs(out[list(detected)]) ** 2)))


def looped_merger_no_click(alpha: complex, beta: complex, rounds: int, eta: float = 1.0) -> float:
    """
    The looped merger: the stored pulse meets ``√(2^k) β`` on a balanced
    splitter in round ``k`` and one port goes to a single detector.
    """
    if rounds < 1:
        raise ParameterError('at least one round is needed', rounds)
    stored = complex(alpha)
    detected = 0.0
    for k in range(rounds):
        fresh = math.sqrt(2 ** k) * beta
        detected += abs(stored - fresh) ** 2 / 2
        stored = (stored + fresh) / math.sqrt(2)
    return math.exp(-eta * detected)


def _check_visibility(nu: float) -> None:
    if not 0.0 <= nu <= 1.0:
        raise ParameterError('visibility must lie in [0, 1]', nu)


def imperfect_beam_splitter(nu: float) -> np.ndarray:
    """
    ``H′ = [[A, B], [A, −B]] / √2`` with ``A, B = √ν ± √(1−ν)``; not unitary
    for ν < 1.
    """
    _check_visibility(nu)
    a = math.sqrt(nu) + math.sqrt(1 - nu)
    b = math.sqrt(nu) - math.sqrt(1 - nu)
    return np.array([[a, b], [a, -b]], dtype=complex) / math.sqrt(2)


def imperfect_merger(nu: float, m: int = 4) -> np.ndarray:
    return merger_interferometer(m, imperfect_beam_splitter(nu))


def merger_imperfect(
    alpha: complex, beta: complex, nu: float, eta: float,
) -> Tuple[float, float, float, float]:
    """
    Completeness and soundness of the imperfect two- and four-mode merger
    schemes with visibility ν and efficiency η.

    :returns: ``(c2, c4, s2, s4)``
    """
    _check_visibility(nu)
    if not 0.0 <= eta <= 1.0:
        raise ParameterError('efficiency must lie in [0, 1]', eta)
    a2 = abs(alpha) ** 2
    b2 = abs(beta) ** 2
    d2 = abs(alpha - beta) ** 2
    root = math.sqrt(nu * (1 - nu))
    c2 = math.exp(-2 * eta * (1 - nu) * a2)
    c4 = math.exp(-2 * eta * (1 - nu) * (1 + 2 * nu) * a2)
    s2 = 1 - math.exp(-eta * ((nu - 0.5) * d2 + (1 - nu + root) * a2 + (1 - nu - root) * b2))
    mixed = (1 + 2 * nu) * (1 - nu)
    s4 = 1 - math.exp(-eta * ((nu ** 2 - 0.25) * d2 + (mixed + 2 * root) * a2 + (mixed - 2 * root) * b2))
    return c2, c4, s2, s4
