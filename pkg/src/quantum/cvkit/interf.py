"""
Photon-counting statistics of passive interferometers, including adaptive
circuits where intermediate modes are measured and steer later stages.
"""

from __future__ import annotations

import itertools
import logging
import math
from typing import (
    Callable,
    Dict,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
)

import attr
import numpy as np

from .config import get_config
from .exceptions import DimensionError, ParameterError, SizeLimitError
from .fock import enumerate_sector, sector_size
from .matfun import permanent_exact, repeat_matrix
from .types import Occupation
from .utils import check_unitary, direct_sum, make_rng, multi_factorial

__all__ = (
    'bs_amplitude',
    'bs_probability',
    'bs_distribution',
    'bs_sample',
    'TableStages',
    'AdaptiveCircuit',
    'adaptive_final_probability',
    'adaptive_overlap',
    'lift_unitary',
)

log = logging.getLogger('quantum.cvkit.interf')


def _occupation(value: Sequence[int], modes: int, name: str) -> Occupation:
    occ = tuple(int(v) for v in value)
    if len(occ) != modes:
        raise DimensionError(f'{name} occupation length differs from the mode count', modes, len(occ))
    if any(v < 0 for v in occ):
        raise ParameterError(f'negative {name} occupation', occ)
    return occ


def _permanent(a: np.ndarray) -> complex:
    return permanent_exact(a, 'ryser' if a.shape[0] > 3 else 'naive')


def bs_amplitude(u: np.ndarray, inp: Occupation, out: Occupation) -> complex:
    """``⟨out|Û|inp⟩ = Per(U_{out,inp}) / √(out! inp!)`` without validation."""
    if sum(inp) != sum(out):
        return 0j
    sub = repeat_matrix(u, (out, inp))
    return _permanent(sub) / math.sqrt(multi_factorial(out) * multi_factorial(inp))


def bs_probability(unitary, inp: Sequence[int], out: Sequence[int]) -> float:
    """
    The probability of detecting *out* when the Fock state *inp* enters the
    interferometer *unitary*.
    """
    u = check_unitary(unitary)
    m = u.shape[0]
    inp = _occupation(inp, m, 'input')
    out = _occupation(out, m, 'output')
    return abs(bs_amplitude(u, inp, out)) ** 2


def bs_distribution(unitary, inp: Sequence[int]) -> Tuple[List[Occupation], np.ndarray]:
    """All outcomes of the input's photon-number sector and their probabilities."""
    u = check_unitary(unitary)
    m = u.shape[0]
    inp = _occupation(inp, m, 'input')
    outcomes = enumerate_sector(m, sum(inp))
    probs = np.array([abs(bs_amplitude(u, inp, s)) ** 2 for s in outcomes])
    return outcomes, probs


def bs_sample(unitary, inp: Sequence[int], count: int, seed: Optional[int]) -> np.ndarray:
    """
    Draws *count* output patterns mode by mode: each mode's count is drawn
    from its marginal conditioned on the counts already drawn.

    :returns: An integer array of shape ``(count, m)``.
    """
    if count < 0:
        raise ParameterError('negative sample count', count)
    outcomes, probs = bs_distribution(unitary, inp)
    m = len(outcomes[0])
    table = np.array(outcomes, dtype=int)
    rng = make_rng(seed)
    uniforms = rng.random((count, m))
    drawn = np.zeros((count, m), dtype=int)
    # candidate outcome indices consistent with each sample's prefix
    for j in range(m):
        prefixes: Dict[Tuple[int, ...], List[int]] = {}
        for i, row in enumerate(drawn[:, :j]):
            prefixes.setdefault(tuple(row), []).append(i)
        for prefix, members in prefixes.items():
            mask = np.all(table[:, :j] == np.array(prefix, dtype=int), axis=1)
            values = np.unique(table[mask, j])[::-1]
            weights = np.array([probs[mask & (table[:, j] == v)].sum() for v in values])
            total = weights.sum()
            if total <= 0:
                weights = np.full(values.size, 1.0 / values.size)
            else:
                weights = weights / total
            cumulative = np.cumsum(weights)
            cumulative[-1] = 1.0
            rows = np.array(members)
            picks = np.searchsorted(cumulative, uniforms[rows, j], side='right')
            drawn[rows, j] = values[np.minimum(picks, values.size - 1)]
    return drawn


@attr.define(slots=True, frozen=True)
class TableStages:
    """
    Adaptive stage unitaries looked up by the measured prefix
    ``(p_1, …, p_j)``.  Missing prefixes act as the identity.
    """

    table: Mapping[Tuple[int, ...], np.ndarray] = attr.field(
        converter=lambda t: {
            tuple(int(x) for x in k): np.asarray(v, dtype=complex) for k, v in t.items()
        },
    )

    def __call__(self, prefix: Tuple[int, ...], size: int) -> np.ndarray:
        u = self.table.get(tuple(prefix))
        if u is None:
            return np.eye(size, dtype=complex)
        return u


StageFunction = Callable[[Tuple[int, ...], int], np.ndarray]


@attr.define(slots=True, frozen=True)
class AdaptiveCircuit:
    """
    An m-mode interferometer fed with ``|1ⁿ0^{m−n}⟩`` whose first *k* modes
    are measured one at a time; after measuring mode j the unitary
    ``stages((p_1, …, p_j), m − j)`` acts on the modes after j.
    """

    modes: int = attr.field()
    photons: int = attr.field()
    adaptive_modes: int = attr.field()
    base_unitary: np.ndarray = attr.field(converter=lambda u: np.asarray(u, dtype=complex))
    stages: StageFunction = attr.field(factory=lambda: TableStages({}))

    def __attrs_post_init__(self) -> None:
        if not 0 <= self.photons <= self.modes:
            raise ParameterError('photon count must be within [0, m]', self.photons, self.modes)
        if not 0 <= self.adaptive_modes < self.modes:
            raise ParameterError('adaptive mode count must be within [0, m)', self.adaptive_modes)
        if self.base_unitary.shape != (self.modes, self.modes):
            raise DimensionError('base unitary size', (self.modes, self.modes), self.base_unitary.shape)
        check_unitary(self.base_unitary)

    @property
    def input_state(self) -> Occupation:
        return (1,) * self.photons + (0,) * (self.modes - self.photons)

    def unitary_for(self, prefix: Sequence[int]) -> np.ndarray:
        """``[1_k ⊕ U_k] … [1_1 ⊕ U_1] U_0`` for the measured prefix."""
        prefix = tuple(int(p) for p in prefix)
        if len(prefix) != self.adaptive_modes:
            raise DimensionError('prefix length', self.adaptive_modes, len(prefix))
        total = self.base_unitary
        for j in range(1, self.adaptive_modes + 1):
            stage = check_unitary(self.stages(prefix[:j], self.modes - j))
            if stage.shape[0] != self.modes - j:
                raise DimensionError('stage unitary size', self.modes - j, stage.shape[0])
            total = direct_sum(np.eye(j, dtype=complex), stage) @ total
        return total


def adaptive_final_probability(circuit: AdaptiveCircuit, final: Sequence[int]) -> float:
    """
    The probability of the outcome *final* on the last ``m − k`` modes,
    summed over every compatible pattern of the adaptive modes.
    """
    m, n, k = circuit.modes, circuit.photons, circuit.adaptive_modes
    final = _occupation(final, m - k, 'final')
    left = n - sum(final)
    if left < 0:
        return 0.0
    t = circuit.input_state
    total = 0.0
    for p in enumerate_sector(k, left) if k else [()]:
        u = circuit.unitary_for(p)
        total += abs(bs_amplitude(u, t, (*p, *final))) ** 2
    return total


def adaptive_overlap(
    circuit_p: AdaptiveCircuit,
    p: Sequence[int],
    circuit_q: AdaptiveCircuit,
    q: Sequence[int],
) -> complex:
    """
    The overlap ``⟨ψ_p|ψ_q⟩`` of the unnormalized states left on the last
    ``m − k`` modes after the adaptive outcomes *p* and *q*, expanded by
    photon subsets as ``(1/√(p!q!)) Σ_{i,j} Per(A_i) Per(B_j) Per(C_ij)``.
    """
    m, n, k = circuit_p.modes, circuit_p.photons, circuit_p.adaptive_modes
    if (circuit_q.modes, circuit_q.photons, circuit_q.adaptive_modes) != (m, n, k):
        raise DimensionError('circuits differ in shape', (m, n, k),
                             (circuit_q.modes, circuit_q.photons, circuit_q.adaptive_modes))
    p = _occupation(p, k, 'adaptive')
    q = _occupation(q, k, 'adaptive')
    r = sum(p)
    if r != sum(q) or r > n:
        return 0j
    w = circuit_p.unitary_for(p).conj().T   # rows: input modes
    v = circuit_q.unitary_for(q)            # cols: input modes
    p_cols = np.repeat(np.arange(k), p)
    q_rows = np.repeat(np.arange(k), q)
    tail = np.arange(k, m)
    photons = range(n)
    total = 0j
    for i in itertools.combinations(photons, r):
        i_rest = [x for x in photons if x not in i]
        per_a = _permanent(w[np.ix_(i, p_cols)])
        if per_a == 0:
            continue
        for j in itertools.combinations(photons, r):
            j_rest = [x for x in photons if x not in j]
            per_b = _permanent(v[np.ix_(q_rows, j)])
            c = w[np.ix_(i_rest, tail)] @ v[np.ix_(tail, j_rest)]
            total += per_a * per_b * _permanent(c)
    return total / math.sqrt(multi_factorial(p) * multi_factorial(q))


def lift_unitary(unitary, photons: int) -> np.ndarray:
    """
    The action of *unitary* on the n-photon sector, indexed by
    :func:`enumerate_sector` order.
    """
    u = check_unitary(unitary)
    m = u.shape[0]
    size = sector_size(m, photons)
    limit = get_config().lift_limit
    if size > limit:
        raise SizeLimitError('lifted dimension', size, limit)
    basis = enumerate_sector(m, photons)
    lifted = np.empty((size, size), dtype=complex)
    for col, t in enumerate(basis):
        for row, s in enumerate(basis):
            lifted[row, col] = bs_amplitude(u, t, s)
    return lifted
