"""
Sparse photon-number states and truncated single-mode Gaussian operators.
"""

from __future__ import annotations

import cmath
import logging
import math
import warnings
from collections import defaultdict
from typing import (
    Dict,
    List,
    Mapping,
    Sequence,
    Tuple,
)

import numpy as np
from scipy.special import comb

from .config import get_config, get_tolerances
from .exceptions import (
    DimensionError,
    NotNormalizedError,
    ParameterError,
    SizeLimitError,
    TruncationWarning,
)
from .types import FockVector, Occupation
from .utils import check_unitary, multi_factorial

__all__ = (
    'enumerate_sector',
    'sector_size',
    'fock_state',
    'coherent_state',
    'superposition',
    'state_distance',
    'apply_ladder',
    'apply_interferometer_fock',
    'squeezed_coherent_amplitudes',
    'gaussian_unitary_matrix',
    'truncated_gaussian',
)

log = logging.getLogger('quantum.cvkit.fock')


def sector_size(modes: int, photons: int) -> int:
    return int(comb(modes + photons - 1, photons, exact=True))


def enumerate_sector(modes: int, photons: int) -> List[Occupation]:
    """
    All occupation tuples of *photons* over *modes*, the first mode's
    count decreasing first: ``(2,0), (1,1), (0,2)``.
    """
    if modes < 1 or photons < 0:
        raise ParameterError('invalid sector', modes, photons)
    size = sector_size(modes, photons)
    limit = get_config().max_sector
    if size > limit:
        raise SizeLimitError('sector', size, limit)

    def _walk(m: int, n: int):
        if m == 1:
            yield (n,)
            return
        for first in range(n, -1, -1):
            for rest in _walk(m - 1, n - first):
                yield (first, *rest)

    return list(_walk(modes, photons))


def fock_state(occupation: Sequence[int], cutoff: int = None) -> FockVector:
    occ = tuple(int(n) for n in occupation)
    top = max(occ) if cutoff is None else cutoff
    return FockVector(len(occ), top, {occ: 1.0})


def coherent_state(alpha: complex, cutoff: int) -> FockVector:
    """A single-mode coherent state truncated at *cutoff* photons."""
    amps = {}
    value = cmath.exp(-abs(alpha) ** 2 / 2)
    for n in range(cutoff + 1):
        amps[(n,)] = value
        value = value * alpha / math.sqrt(n + 1)
    lost = max(0.0, 1.0 - sum(abs(v) ** 2 for v in amps.values()))
    return FockVector(1, cutoff, amps, truncated_norm=lost)


def superposition(amplitudes: Mapping[Sequence[int], complex], cutoff: int = None) -> FockVector:
    items = {tuple(k): complex(v) for k, v in amplitudes.items()}
    if not items:
        raise ParameterError('empty superposition')
    modes = {len(k) for k in items}
    if len(modes) != 1:
        raise DimensionError('occupations of different lengths', 1, len(modes))
    top = max(max(k) for k in items) if cutoff is None else cutoff
    return FockVector(modes.pop(), top, items).normalized()


def _check_normalized(state: FockVector) -> None:
    tol = get_tolerances().normalization
    norm2 = state.norm() ** 2
    if abs(norm2 - 1.0) > tol:
        raise NotNormalizedError(norm2, tol)


def state_distance(a: FockVector, b: FockVector) -> Tuple[float, float]:
    """
    The fidelity ``|⟨a|b⟩|²`` and the trace distance ``√(1 − |⟨a|b⟩|²)``
    of two normalized pure states.
    """
    if a.modes != b.modes:
        raise DimensionError('mode counts differ', a.modes, b.modes)
    _check_normalized(a)
    _check_normalized(b)
    fidelity = min(1.0, abs(a.inner(b)) ** 2)
    return fidelity, math.sqrt(max(0.0, 1.0 - fidelity))


def apply_ladder(state: FockVector, mode: int, kind: str) -> FockVector:
    """
    Applies ``a`` (``kind='annihilation'``) or ``a†`` (``kind='creation'``) on
    one mode.  Creation at the cutoff drops the component and records the
    lost squared norm on the result.
    """
    if not 0 <= mode < state.modes:
        raise DimensionError('mode index out of range', state.modes, mode)
    if kind not in ('creation', 'annihilation'):
        raise ParameterError('unknown ladder operator', kind)
    result: Dict[Occupation, complex] = defaultdict(complex)
    lost = state.truncated_norm
    for occ, amp in state.amplitudes.items():
        n = occ[mode]
        if kind == 'annihilation':
            if n == 0:
                continue
            target = occ[:mode] + (n - 1,) + occ[mode + 1:]
            result[target] += amp * math.sqrt(n)
        else:
            value = amp * math.sqrt(n + 1)
            if n + 1 > state.cutoff[mode]:
                lost += abs(value) ** 2
                continue
            target = occ[:mode] + (n + 1,) + occ[mode + 1:]
            result[target] += value
    if lost > state.truncated_norm:
        warnings.warn(
            f'creation on mode {mode} exceeded the cutoff {state.cutoff[mode]}',
            TruncationWarning,
        )
    return FockVector(state.modes, state.cutoff, dict(result), truncated_norm=lost)


def apply_interferometer_fock(unitary, state: FockVector) -> FockVector:
    """
    Evolves *state* through the passive interferometer *unitary* by
    expanding ``Π_j (Σ_k u_kj a†_k)^{s_j}`` monomial by monomial.
    """
    u = check_unitary(unitary)
    m = u.shape[0]
    if m != state.modes:
        raise DimensionError('interferometer size differs from mode count', state.modes, m)
    top = max(state.photon_numbers(), default=0)
    result: Dict[Occupation, complex] = defaultdict(complex)
    for occ, amp in state.amplitudes.items():
        # coefficients of the unnormalized monomials Π a†_k^{t_k}
        poly: Dict[Occupation, complex] = {(0,) * m: amp / math.sqrt(multi_factorial(occ))}
        for j, count in enumerate(occ):
            for _ in range(count):
                grown: Dict[Occupation, complex] = defaultdict(complex)
                for mono, coeff in poly.items():
                    for k in range(m):
                        if u[k, j] == 0:
                            continue
                        key = mono[:k] + (mono[k] + 1,) + mono[k + 1:]
                        grown[key] += coeff * u[k, j]
                poly = grown
        for mono, coeff in poly.items():
            result[mono] += coeff * math.sqrt(multi_factorial(mono))
    return FockVector(m, max(top, 1), dict(result), truncated_norm=state.truncated_norm)


def _squeeze_parts(xi: complex) -> Tuple[float, float, float, complex]:
    r = abs(xi)
    theta = cmath.phase(xi) if r > 0 else 0.0
    return math.cosh(r), math.sinh(r), math.tanh(r), cmath.exp(1j * theta)


def squeezed_coherent_amplitudes(xi: complex, alpha: complex, size: int) -> np.ndarray:
    """
    The Fock amplitudes ``⟨n|Ŝ(ξ)|α⟩`` for ``n < size`` through the
    three-term Hermite recurrence of the Gaussian stellar function.
    """
    c, _, t, phase = _squeeze_parts(xi)
    a = t / phase
    b = alpha / c
    c0 = 0.5 * t * phase * alpha ** 2 - 0.5 * abs(alpha) ** 2
    g = np.zeros(size, dtype=complex)
    if size == 0:
        return g
    g[0] = cmath.exp(c0) / math.sqrt(c)
    if size > 1:
        g[1] = b * g[0]
    for i in range(1, size - 1):
        g[i + 1] = (b * g[i] - a * math.sqrt(i) * g[i - 1]) / math.sqrt(i + 1)
    return g


def gaussian_unitary_matrix(xi: complex, alpha: complex, rows: int, cols: int) -> np.ndarray:
    """
    The block ``⟨n|Ŝ(ξ)D̂(α)|k⟩`` for ``n < rows`` and ``k < cols``.

    Columns follow ``Ŝ D̂ |k+1⟩ = (c a† + e^{iθ} s a − α*) Ŝ D̂ |k⟩ / √(k+1)``;
    the working space is large enough for the requested block to be exact.
    """
    if rows < 1 or cols < 1:
        raise ParameterError('empty block', rows, cols)
    c, s, _, phase = _squeeze_parts(xi)
    size = rows + cols + 1
    v = squeezed_coherent_amplitudes(xi, alpha, size)
    sq = np.sqrt(np.arange(size, dtype=float))
    out = np.empty((rows, cols), dtype=complex)
    out[:, 0] = v[:rows]
    for k in range(cols - 1):
        nxt = -np.conj(alpha) * v
        nxt[1:] += c * sq[1:] * v[:-1]
        nxt[:-1] += phase * s * sq[1:] * v[1:]
        v = nxt / math.sqrt(k + 1)
        out[:, k + 1] = v[:rows]
    return out


def truncated_gaussian(kind: str, parameter: complex, cutoff: int) -> np.ndarray:
    """
    The ``(E+1)×(E+1)`` matrix of a displacement (``kind='displacement'``,
    parameter α) or squeezing (``kind='squeeze'``, parameter ξ) operator.
    """
    if cutoff < 0:
        raise ParameterError('negative cutoff', cutoff)
    if kind == 'displacement':
        return gaussian_unitary_matrix(0j, parameter, cutoff + 1, cutoff + 1)
    if kind == 'squeeze':
        return gaussian_unitary_matrix(parameter, 0j, cutoff + 1, cutoff + 1)
    raise ParameterError('unknown Gaussian operator', kind)
