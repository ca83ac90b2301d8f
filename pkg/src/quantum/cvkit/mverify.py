"""
Multimode verification from heterodyne samples: the translation and
inverse-interferometer reduction, product-fidelity bounds and the
Boson Sampling output witness.
"""

from __future__ import annotations

import logging
import math
from typing import (
    Optional,
    Sequence,
    Tuple,
)

import attr
import numpy as np
from scipy.optimize import brentq

from .exceptions import DimensionError, ParameterError
from .types import SampleBatch
from .utils import check_unitary, parallel_map

__all__ = (
    'postprocess_samples',
    'product_fidelity_bounds',
    'vacuum_estimator',
    'photon_estimator',
    'WitnessReport',
    'witness_failure',
    'bs_witness',
    'required_copies',
)

log = logging.getLogger('quantum.cvkit.mverify')


def postprocess_samples(batch: SampleBatch, unitary, beta=None) -> SampleBatch:
    """
    Maps every sample ``γ ↦ U†(γ − β)``, turning heterodyne samples of
    ``D(β) Û |ψ⟩`` into samples of ``|ψ⟩``.
    """
    u = check_unitary(unitary)
    data = batch.as_matrix()
    if data.shape[1] != u.shape[0]:
        raise DimensionError('sample width does not match the interferometer', u.shape[0], data.shape[1])
    shift = np.zeros(u.shape[0], dtype=complex) if beta is None else np.asarray(beta, dtype=complex)
    if shift.shape != (u.shape[0],):
        raise DimensionError('translation vector length', u.shape[0], shift.shape)
    reduced = (data - shift) @ u.conj()
    return SampleBatch(reduced, batch.seed, dict(batch.metadata, postprocessed=True))


def product_fidelity_bounds(fidelities: Sequence[float]) -> Tuple[float, float]:
    """
    Bounds on the fidelity with a product target from the single-mode
    fidelities: ``1 − Σ εᵢ`` (floored at 0) and ``Π (1 − εᵢ)``.
    """
    values = np.asarray(fidelities, dtype=float)
    if np.any(values < 0) or np.any(values > 1):
        raise ParameterError('fidelities must lie in [0, 1]', values.tolist())
    errors = 1.0 - values
    return max(0.0, 1.0 - float(np.sum(errors))), float(np.prod(values))


def _check_eta(eta: float) -> None:
    if not 0 < eta < 2.0 / 3.0:
        raise ParameterError('η must lie in (0, 2/3)', eta)


def vacuum_estimator(z, eta: float) -> np.ndarray:
    """``f₀(z) = (1/η) e^{(1−1/η)|z|²}``"""
    _check_eta(eta)
    x = np.abs(np.asarray(z)) ** 2
    return np.exp((1 - 1 / eta) * x) / eta


def photon_estimator(z, eta: float) -> np.ndarray:
    """``f₁(z) = (1/η²)(|z|²/η − 1) e^{(1−1/η)|z|²}``"""
    _check_eta(eta)
    x = np.abs(np.asarray(z)) ** 2
    return (x / eta - 1) * np.exp((1 - 1 / eta) * x) / eta ** 2


@attr.define(slots=True, frozen=True)
class WitnessReport:
    """
    Attributes:
        fidelities: The per-mode fidelity estimates F̃ᵢ.
        witness: ``W̃ = 1 − Σ (1 − F̃ᵢ)``.
        slack: The additive accuracy ε of the witness.
        failure: The probability that the accuracy does not hold.
        samples: The number of copies N.
    """

    fidelities: Tuple[float, ...]
    witness: float
    slack: float
    failure: float
    samples: int

    @property
    def accepted(self) -> bool:
        return self.witness >= 1.0 - self.slack


def _failure_terms(count: float, modes: int, photons: int, epsilon: float) -> Tuple[float, float]:
    vacant = modes - photons
    vacuum = 0.0
    if vacant:
        vacuum = 2.0 * vacant * math.exp(-2.0 * count * epsilon ** 4 / (4.0 * vacant) ** 4)
    photon = 0.0
    if photons:
        photon = 2.0 * photons * math.exp(-count * epsilon ** 6 / (2.0 * (6.0 * photons) ** 6))
    return vacuum, photon


def witness_failure(count: float, modes: int, photons: int, epsilon: float) -> float:
    """
    ``2[(m−n) e^{−2Nε⁴/(4(m−n))⁴} + n e^{−Nε⁶/(2(6n)⁶)}]``, where an
    empty mode group contributes nothing.
    """
    return sum(_failure_terms(count, modes, photons, epsilon))


def _mode_groups(modes: int, photons: int, input_modes: Optional[Sequence[int]]) -> Tuple[int, ...]:
    if input_modes is None:
        return tuple(range(photons))
    occupied = tuple(sorted(set(int(i) for i in input_modes)))
    if len(occupied) != photons or any(not 0 <= i < modes for i in occupied):
        raise ParameterError('input modes must be n distinct mode indices', input_modes)
    return occupied


def bs_witness(
    batch: SampleBatch,
    unitary,
    photons: int,
    epsilon: float,
    input_modes: Optional[Sequence[int]] = None,
) -> WitnessReport:
    """
    Witness for the Boson Sampling output ``Û |1…1 0…0⟩``.

    The samples are reduced by ``U†``; each mode then gets a single-photon
    fidelity estimate from ``f₁`` (occupied input modes, ``η₁ = λ₁/3``) or a
    vacuum estimate from ``f₀`` (``η₀ = λ₀/2``), with
    ``λ₀ = ε/(2(m−n))`` and ``λ₁ = ε/(2n)``.

    :param input_modes: The occupied input modes when they are not the
        first *photons* modes.
    """
    u = check_unitary(unitary)
    modes = u.shape[0]
    if not 0 <= photons <= modes:
        raise ParameterError('photon number must lie in [0, m]', photons, modes)
    if not 0 < epsilon < 1:
        raise ParameterError('ε must lie in (0, 1)', epsilon)
    occupied = _mode_groups(modes, photons, input_modes)
    reduced = postprocess_samples(batch, u).as_matrix()
    eta_vacuum = epsilon / (4.0 * (modes - photons)) if modes > photons else None
    eta_photon = epsilon / (6.0 * photons) if photons else None

    def _estimate(mode: int) -> float:
        column = reduced[:, mode]
        if mode in occupied:
            return float(np.mean(photon_estimator(column, eta_photon)))
        return float(np.mean(vacuum_estimator(column, eta_vacuum)))

    fidelities = tuple(parallel_map(_estimate, list(range(modes))))
    witness = 1.0 - sum(1.0 - f for f in fidelities)
    count = reduced.shape[0]
    failure = min(1.0, witness_failure(count, modes, photons, epsilon))
    log.debug('witness %.4f from %d copies (failure %.3g)', witness, count, failure)
    return WitnessReport(fidelities, witness, epsilon, failure, count)


def required_copies(modes: int, photons: int, epsilon: float, failure: float) -> int:
    """The smallest copy count whose witness failure is at most *failure*."""
    if not 0 < failure < 1:
        raise ParameterError('failure probability must lie in (0, 1)', failure)

    def _gap(log_count: float) -> float:
        return witness_failure(math.exp(log_count), modes, photons, epsilon) - failure

    hi = 1.0
    while _gap(hi) > 0:
        hi *= 2.0
    root = brentq(_gap, 0.0, hi, xtol=1e-9) if _gap(0.0) > 0 else 0.0
    return int(math.ceil(math.exp(root)))
