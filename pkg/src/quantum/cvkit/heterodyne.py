"""
Heterodyne sampling and the estimators built on it: Fock-basis
tomography, fidelity certification, Wigner function values and the
finite-copy verification bounds.
"""

from __future__ import annotations

import logging
import math
import warnings
from typing import (
    List,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import attr
import numpy as np
from scipy.special import comb, gammaln

from .config import get_config, get_tolerances
from .exceptions import (
    ClampWarning,
    DimensionError,
    NotNormalizedError,
    ParameterError,
    SamplerError,
)
from .gaussian import GaussianState
from .types import ConfidenceValue, FockVector, SampleBatch
from .utils import check_unitary, log_binom, make_rng

__all__ = (
    'sample_husimi',
    'sample_husimi_product',
    'laguerre2d',
    'estimator_f',
    'estimator_bound',
    'kernel_constant',
    'bound_constant',
    'hoeffding_constant',
    'certify_constant',
    'EstimatorParams',
    'TomographyResult',
    'tomo_estimate',
    'tomo_failure',
    'tomo_sample_count',
    'certify_fidelity',
    'VerificationBudget',
    'VerificationBounds',
    'verification_bounds',
    'parameter_family',
    'wigner_point',
    'rank_witness',
)

log = logging.getLogger('quantum.cvkit.heterodyne')


def _fock_amplitudes(state: FockVector) -> np.ndarray:
    if state.modes != 1:
        raise DimensionError('expected a single-mode state', 1, state.modes)
    top = max((occ[0] for occ in state.amplitudes), default=0)
    psi = np.zeros(top + 1, dtype=complex)
    for occ, amp in state.amplitudes.items():
        psi[occ[0]] = amp
    return psi


def _husimi_fock(psi: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    # Q(α) = |e^{−|α|²/2} Σ ψ_n α*ⁿ / √n!|² / π
    n = np.arange(psi.size)
    poly = psi * np.exp(-0.5 * gammaln(n + 1))
    amp = np.polynomial.polynomial.polyval(np.conj(alpha), poly)
    return np.abs(amp) ** 2 * np.exp(-np.abs(alpha) ** 2) / math.pi


def _sample_fock(state: FockVector, count: int, rng: np.random.Generator) -> np.ndarray:
    psi = _fock_amplitudes(state)
    norm2 = float(np.sum(np.abs(psi) ** 2))
    tol = get_tolerances().normalization
    if abs(norm2 - 1.0) > tol:
        raise NotNormalizedError(norm2, tol)
    top = psi.size - 1
    var = top + 1.0
    # envelope of Q/g from Cauchy–Schwarz: var e^{−R(1−1/var)} Σ_{n≤N} Rⁿ/n!
    radii = np.linspace(0.0, 20.0 * var, 4001)
    partial = np.zeros_like(radii)
    term = np.ones_like(radii)
    for k in range(top + 1):
        partial += term
        term = term * radii / (k + 1)
    envelope = 1.05 * var * float(np.max(np.exp(-radii * (1 - 1 / var)) * partial))
    acceptance = 1.0 / envelope
    minimum = get_config().min_acceptance
    if acceptance < minimum:
        raise SamplerError(acceptance, minimum)
    accepted: List[np.ndarray] = []
    have = 0
    batch = max(64, int(1.2 * count * envelope))
    while have < count:
        proposal = math.sqrt(var / 2) * (rng.standard_normal(batch) + 1j * rng.standard_normal(batch))
        g = np.exp(-np.abs(proposal) ** 2 / var) / (math.pi * var)
        keep = rng.random(batch) * envelope * g <= _husimi_fock(psi, proposal)
        accepted.append(proposal[keep])
        have += int(np.count_nonzero(keep))
    return np.concatenate(accepted)[:count]


def _sample_gaussian(state: GaussianState, count: int, rng: np.random.Generator) -> np.ndarray:
    m = state.modes
    eye = np.eye(m)
    w = np.block([[eye, 1j * eye], [eye, -1j * eye]])
    sigma = state.covariance + np.eye(2 * m) / 2
    cov = np.real(w.conj().T @ sigma @ w) / 4
    mean = np.concatenate([state.displacement.real, state.displacement.imag])
    draws = rng.multivariate_normal(mean, (cov + cov.T) / 2, size=count, method='cholesky')
    return draws[:, :m] + 1j * draws[:, m:]


def sample_husimi(
    state: Union[FockVector, GaussianState],
    count: int,
    seed: Optional[int],
) -> SampleBatch:
    """
    Draws heterodyne outcomes distributed as the Husimi function of
    *state*: exactly for Gaussian states, by rejection from a wide complex
    Gaussian for single-mode Fock superpositions.
    """
    if count < 0:
        raise ParameterError('negative sample count', count)
    rng = make_rng(seed)
    if isinstance(state, GaussianState):
        samples = _sample_gaussian(state, count, rng)
        kind = 'gaussian'
    else:
        samples = _sample_fock(state, count, rng)
        kind = 'fock'
    return SampleBatch(samples, seed, {'state': kind})


def sample_husimi_product(
    states: Sequence[FockVector],
    count: int,
    seed: Optional[int],
    unitary=None,
) -> SampleBatch:
    """
    Heterodyne samples of a product of single-mode states, optionally
    sent through a passive interferometer (``γ = U α``).
    """
    if not states:
        raise ParameterError('no states given')
    rng = make_rng(seed)
    columns = [_sample_fock(s, count, rng) for s in states]
    samples = np.column_stack(columns)
    if unitary is not None:
        u = check_unitary(unitary)
        if u.shape[0] != len(states):
            raise DimensionError('interferometer size', len(states), u.shape[0])
        samples = samples @ u.T
    return SampleBatch(samples, seed, {'state': 'product', 'modes': len(states)})


def laguerre2d(k: int, l: int, z) -> Union[complex, np.ndarray]:  # noqa: E741
    """
    ``L_{k,l}(z) = (1/√(k!l!)) Σ_j (−1)^j k! l! / (j!(k−j)!(l−j)!) z^{l−j} z*^{k−j}``
    """
    if k < 0 or l < 0:
        raise ParameterError('negative index', k, l)
    z = np.asarray(z, dtype=complex)
    total = np.zeros_like(z)
    for j in range(min(k, l) + 1):
        log_coeff = (gammaln(k + 1) + gammaln(l + 1)) / 2 \
            - gammaln(j + 1) - gammaln(k - j + 1) - gammaln(l - j + 1)
        total = total + (-1) ** j * math.exp(log_coeff) * z ** (l - j) * np.conj(z) ** (k - j)
    return total if total.ndim else complex(total)


def _as_operator(matrix) -> np.ndarray:
    a = np.asarray(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError('operator must be square', 'square', a.shape)
    return a


def estimator_f(operator, eta: float, z) -> Union[complex, np.ndarray]:
    """
    The single-sample estimator of ``Tr(A ρ)`` with smoothing η:

    ``f_A(z, η) = (1/η) e^{(1−1/η)|z|²} Σ_{k,l} A_kl η^{−(k+l)/2} L_{k,l}(z/√η)``

    η must lie in ``(0, 2/E)`` where E is the highest Fock index A touches.
    """
    a = _as_operator(operator)
    support = np.argwhere(a != 0)
    top = int(support.max()) if support.size else 0
    if eta <= 0 or (top > 0 and eta >= 2.0 / top):
        raise ParameterError('η must lie in (0, 2/E)', eta, top)
    z = np.asarray(z, dtype=complex)
    w = z / math.sqrt(eta)
    total = np.zeros_like(z)
    for (k, l), value in np.ndenumerate(a):  # noqa: E741
        if value != 0:
            total = total + value * eta ** (-(k + l) / 2) * laguerre2d(k, l, w)
    result = np.exp((1 - 1 / eta) * np.abs(z) ** 2) * total / eta
    return result if result.ndim else complex(result)


def _fock_projector(k: int, l: int) -> np.ndarray:  # noqa: E741
    """``|l⟩⟨k|``, whose expectation is ``ρ_kl``."""
    a = np.zeros((max(k, l) + 1,) * 2, dtype=complex)
    a[l, k] = 1.0
    return a


def kernel_constant(operator) -> float:
    """``K_A = Σ_{k,l} |A_kl| √((k+1)(l+1))``"""
    a = _as_operator(operator)
    n = np.sqrt(np.arange(a.shape[0]) + 1.0)
    return float(np.sum(np.abs(a) * np.outer(n, n)))


def bound_constant(k: int, l: int) -> float:  # noqa: E741
    """``M_kl = √(2^{|l−k|} C(max, min))``"""
    return math.sqrt(2 ** abs(l - k) * comb(max(k, l), min(k, l), exact=True))


def estimator_bound(k: int, l: int, eta: float) -> float:  # noqa: E741
    """Uniform bound on ``|f_{|k⟩⟨l|}(z, η)|`` for ``η ∈ (0, 1/2]``."""
    if not 0 < eta <= 0.5:
        raise ParameterError('the uniform bound needs η in (0, 1/2]', eta)
    return bound_constant(k, l) / eta ** (1 + (k + l) / 2)


def hoeffding_constant(k: int, l: int) -> float:  # noqa: E741
    """``C_kl = [(k+1)(l+1)]^{1+(k+l)/2} 2^{|l−k|} C(max, min)``"""
    return ((k + 1) * (l + 1)) ** (1 + (k + l) / 2) * 2 ** abs(l - k) \
        * comb(max(k, l), min(k, l), exact=True)


@attr.define(slots=True, frozen=True)
class EstimatorParams:
    """
    Accuracy parameters shared by the heterodyne estimators.

    ``eta`` must lie in ``(0, 2/E)`` for the energy cutoff ``E`` and both
    accuracies must be positive.
    """

    eta: float = attr.field()
    cutoff: int = attr.field()
    eps: float = attr.field(default=0.1)
    eps_prime: float = attr.field(default=0.1)
    copies: int = attr.field(default=1)

    def __attrs_post_init__(self) -> None:
        if self.cutoff < 0:
            raise ParameterError('negative cutoff', self.cutoff)
        if not 0 < self.eta < 2.0 / max(self.cutoff, 1):
            raise ParameterError('η must lie in (0, 2/E)', self.eta, self.cutoff)
        if self.eps <= 0 or self.eps_prime <= 0:
            raise ParameterError('accuracies must be positive', self.eps, self.eps_prime)
        if self.copies < 1:
            raise ParameterError('copy count must be positive', self.copies)


@attr.define(slots=True, frozen=True, eq=False)
class TomographyResult:
    """The estimated density matrix with its common entrywise bound."""

    matrix: np.ndarray
    bound: float
    failure: float
    samples: int

    def entry(self, k: int, l: int) -> ConfidenceValue:  # noqa: E741
        return ConfidenceValue(complex(self.matrix[k, l]), self.bound, self.failure)

    def entries(self) -> List[List[ConfidenceValue]]:
        size = self.matrix.shape[0]
        return [[self.entry(k, l) for l in range(size)] for k in range(size)]  # noqa: E741


def _check_epsilons(eps: float, eps_prime: float) -> None:
    if not 0 < eps < 1 or not 0 < eps_prime < 1:
        raise ParameterError('ε and ε′ must lie in (0, 1)', eps, eps_prime)


def _log_tomo_terms(count: int, cutoff: int, eps: float, eps_prime: float) -> List[float]:
    terms = []
    for k in range(cutoff + 1):
        for l in range(k, cutoff + 1):  # noqa: E741
            exponent = count * eps ** (2 + k + l) * eps_prime ** 2 / (4 * hoeffding_constant(k, l))
            terms.append(math.log(4.0) - exponent)
    return terms


def tomo_failure(count: int, cutoff: int, eps: float, eps_prime: float) -> float:
    """``4 Σ_{k≤l≤E} exp[−n ε^{2+k+l} ε′² / (4 C_kl)]``, capped at 1."""
    total = sum(math.exp(t) for t in _log_tomo_terms(count, cutoff, eps, eps_prime))
    return min(1.0, total)


def tomo_sample_count(cutoff: int, eps: float, eps_prime: float, delta: float) -> int:
    """The smallest sample count whose tomography failure is at most δ."""
    _check_epsilons(eps, eps_prime)
    if not 0 < delta < 1:
        raise ParameterError('δ must lie in (0, 1)', delta)
    hi = 1
    while tomo_failure(hi, cutoff, eps, eps_prime) > delta:
        hi *= 2
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if tomo_failure(mid, cutoff, eps, eps_prime) > delta:
            lo = mid
        else:
            hi = mid
    return hi


def tomo_estimate(samples: SampleBatch, cutoff: int, eps: float, eps_prime: float) -> TomographyResult:
    """
    Estimates ``ρ_kl`` for ``k, l ≤ E`` as the sample mean of
    ``f_{|l⟩⟨k|}(α, η_kl)`` with ``η_kl = ε / √((k+1)(l+1))``; every entry
    is within ``ε + ε′`` except with the returned failure probability.
    """
    _check_epsilons(eps, eps_prime)
    if cutoff < 0:
        raise ParameterError('negative cutoff', cutoff)
    data = samples.as_matrix()
    if data.shape[1] != 1:
        raise DimensionError('tomography expects single-mode samples', 1, data.shape[1])
    z = data[:, 0]
    rho = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    for k in range(cutoff + 1):
        for l in range(k, cutoff + 1):  # noqa: E741
            eta = eps / math.sqrt((k + 1) * (l + 1))
            value = complex(np.mean(estimator_f(_fock_projector(k, l), eta, z)))
            rho[k, l] = value
            rho[l, k] = value.conjugate()
        rho[k, k] = rho[k, k].real
    failure = tomo_failure(z.size, cutoff, eps, eps_prime)
    return TomographyResult(rho, eps + eps_prime, failure, z.size)


def certify_constant(target: FockVector, copies: int, cutoff: int, eps: float) -> float:
    """
    ``C_ψ = Σ_{k,l} |ψ_k ψ_l| (ε/m)^{E−(k+l)/2} K_ψ^{1+(k+l)/2} M_kl``
    """
    psi = _fock_amplitudes(target)
    k_psi = float(np.sum(np.abs(psi) * np.sqrt(np.arange(psi.size) + 1.0))) ** 2
    total = 0.0
    for k in range(psi.size):
        for l in range(psi.size):  # noqa: E741
            weight = abs(psi[k] * psi[l])
            if weight == 0:
                continue
            total += weight * (eps / copies) ** (cutoff - (k + l) / 2) \
                * k_psi ** (1 + (k + l) / 2) * bound_constant(k, l)
    return total


def certify_fidelity(
    samples: SampleBatch,
    target: FockVector,
    copies: int,
    cutoff: int,
    support: int,
    eps: float,
    eps_prime: float,
) -> Tuple[ConfidenceValue, int, float]:
    """
    Certifies the fidelity of i.i.d. copies with the pure *target*.

    :returns: ``(F, r, P_support)``: the fidelity estimate
        ``[mean f_ψ(α, ε/(m K_ψ))]^m`` with its bound, the count of samples
        with ``|α|² > E`` and the support-estimation failure probability.
    """
    _check_epsilons(eps, eps_prime)
    if copies < 1 or cutoff < 0 or support < 0:
        raise ParameterError('invalid copy count, cutoff or support', copies, cutoff, support)
    psi = _fock_amplitudes(target)
    norm2 = float(np.sum(np.abs(psi) ** 2))
    tol = get_tolerances().normalization
    if abs(norm2 - 1.0) > tol:
        raise NotNormalizedError(norm2, tol)
    if psi.size - 1 > cutoff:
        raise ParameterError('the target support exceeds the cutoff', psi.size - 1, cutoff)
    data = samples.as_matrix()
    if data.shape[1] != 1:
        raise DimensionError('certification expects single-mode samples', 1, data.shape[1])
    z = data[:, 0]
    n = z.size
    k_psi = float(np.sum(np.abs(psi) * np.sqrt(np.arange(psi.size) + 1.0))) ** 2
    eta = eps / (copies * k_psi)
    operator = np.outer(psi, psi.conj())
    mean = float(np.real(np.mean(estimator_f(operator, eta, z))))
    clamped = False
    if mean < 0.0 or mean > 1.0:
        clamped = True
        warnings.warn(f'fidelity estimate {mean:.4f} clamped to [0, 1]', ClampWarning)
        mean = min(1.0, max(0.0, mean))
    fidelity = mean ** copies
    c_psi = certify_constant(target, copies, cutoff, eps)
    exponent = n * eps ** (2 + 2 * cutoff) * eps_prime ** 2
    exponent /= 2 * copies ** (4 + 2 * cutoff) * c_psi ** 2
    p_hoeffding = 2.0 * math.exp(-exponent)
    outside = int(np.count_nonzero(np.abs(z) ** 2 > cutoff))
    p_support = (support + 1) ** 1.5 / n * math.exp((support + 1) ** 2 / (n + 1))
    value = ConfidenceValue(fidelity, eps + eps_prime, min(1.0, p_support + p_hoeffding), clamped)
    return value, outside, p_support


@attr.define(slots=True, frozen=True)
class VerificationBudget:
    """
    Sample budget of the finite-copy verification protocol.

    Attributes:
        samples: The total number of heterodyne samples n.
        copies: The number of target copies m.
        cutoff: The energy cutoff E.
        support: The support threshold s.
        k: The support-test subsample size.
        q: The discarded de Finetti block size.
        eps: The smoothing accuracy ε.
        eps_prime: The statistical accuracy ε′.
    """

    samples: float
    copies: int
    cutoff: int
    support: int
    k: float
    q: float
    eps: float
    eps_prime: float

    def __attrs_post_init__(self) -> None:
        if self.copies < 1 or self.cutoff < 0:
            raise ParameterError('need m ≥ 1 and E ≥ 0', self.copies, self.cutoff)
        if not (0 < self.k and 0 <= self.support <= self.k):
            raise ParameterError('need 0 ≤ s ≤ k', self.support, self.k)
        if self.q < self.copies:
            raise ParameterError('need q ≥ m', self.q, self.copies)
        if self.samples <= 8 * self.q:
            raise ParameterError('need n > 8q', self.samples, self.q)
        if self.eps <= 0 or self.eps_prime <= 0:
            raise ParameterError('accuracies must be positive', self.eps, self.eps_prime)


@attr.define(slots=True, frozen=True)
class VerificationBounds:

    p_support: float
    p_definetti: float
    p_choice: float
    p_hoeffding: float
    slack: float

    @property
    def failure(self) -> float:
        return min(1.0, self.p_support + self.p_definetti + self.p_choice + self.p_hoeffding)


def _exp(value: float) -> float:
    return math.inf if value > 700 else math.exp(value)


def verification_bounds(budget: VerificationBudget, c_psi: float) -> VerificationBounds:
    """
    The failure terms of the verification protocol, evaluated in log
    space:

    - ``P_support = 8 k^{3/2} exp[−(k/9)(q/n − 2s/k)²]``
    - ``P_deFinetti = q^{(E+1)²/2} exp[−2q(q+1)/n]``
    - ``P_choice = m(4q+m−1)/(n−4q)``
    - ``P_Hoeffding = 2 C(n−4q, 4q) exp[−(n−8q)/(2m^{4+2E}) D²]`` with
      ``D = ε^{1+E}ε′/C_ψ − 8q m^{2+E}/(n−4q−m)``
    """
    n, m, e, s = budget.samples, budget.copies, budget.cutoff, budget.support
    k, q = budget.k, budget.q
    eps, eps_prime = budget.eps, budget.eps_prime
    if not (0 < q and 4 * q + m < n and 0 < k):
        raise ParameterError('need 0 < q, 0 < k and 4q + m < n', q, k, n)
    log_support = math.log(8.0) + 1.5 * math.log(k) - (k / 9.0) * (q / n - 2.0 * s / k) ** 2
    log_definetti = (e + 1) ** 2 / 2 * math.log(q) - 2.0 * q * (q + 1) / n
    p_choice = m * (4 * q + m - 1) / (n - 4 * q)
    gap = eps ** (1 + e) * eps_prime / c_psi - 8.0 * q * m ** (2 + e) / (n - 4 * q - m)
    log_hoeffding = math.log(2.0) + log_binom(n - 4 * q, 4 * q) \
        - (n - 8 * q) / (2.0 * m ** (4 + 2 * e)) * gap ** 2
    p_definetti = _exp(log_definetti)
    return VerificationBounds(
        p_support=_exp(log_support),
        p_definetti=p_definetti,
        p_choice=p_choice,
        p_hoeffding=_exp(log_hoeffding),
        slack=eps + eps_prime + p_definetti,
    )


def parameter_family(copies: int, cutoff: int, support: int) -> VerificationBudget:
    """``n = k = m^{19+8E}``, ``q = m^{10+4E}``, ``ε = ε′ = 1/m``."""
    if copies < 2:
        raise ParameterError('the family needs m ≥ 2', copies)
    m = float(copies)
    n = m ** (19 + 8 * cutoff)
    return VerificationBudget(
        samples=n, copies=copies, cutoff=cutoff, support=support,
        k=n, q=m ** (10 + 4 * cutoff), eps=1.0 / m, eps_prime=1.0 / m,
    )


def wigner_point(
    samples: SampleBatch,
    alpha: complex,
    eta: float,
    cutoff: int,
    failure: float = 0.05,
) -> ConfidenceValue:
    """
    Estimates the Wigner function ``W(α) = (2/π) Tr[D̂(α) Π D̂†(α) ρ]`` with
    the parity ``Π`` truncated at *cutoff*, from samples translated by −α.
    """
    EstimatorParams(eta, cutoff)
    data = samples.as_matrix()
    if data.shape[1] != 1:
        raise DimensionError('Wigner estimation expects single-mode samples', 1, data.shape[1])
    z = data[:, 0] - alpha
    parity = np.diag([(-1.0) ** n for n in range(cutoff + 1)]).astype(complex)
    values = np.real(estimator_f(parity, eta, z))
    estimate = 2.0 / math.pi * float(np.mean(values))
    spread = sum(estimator_bound(n, n, eta) for n in range(cutoff + 1))
    statistical = spread * math.sqrt(2.0 * math.log(2.0 / failure) / z.size)
    bound = 2.0 / math.pi * (eta * kernel_constant(parity) + statistical)
    return ConfidenceValue(estimate, bound, failure)


def rank_witness(fidelity: ConfidenceValue, profile: Sequence[float]) -> int:
    """
    The largest k with ``F − bound > 1 − R_k²`` for the nonincreasing
    robustness profile ``R_1, R_2, …``; 0 if none.
    """
    values = [float(r) for r in profile]
    if any(b > a + 1e-12 for a, b in zip(values, values[1:])):
        raise ParameterError('the robustness profile must be nonincreasing', values)
    lower = float(np.real(fidelity.value)) - fidelity.bound
    rank = 0
    for k, r in enumerate(values, start=1):
        if lower > 1.0 - r ** 2:
            rank = k
    return rank
