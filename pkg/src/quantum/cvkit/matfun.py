"""
Matrix functions behind photon-counting amplitudes: permanents, hafnians
and loop hafnians, with the index-repetition helpers that build their
arguments.
"""

from __future__ import annotations

import functools
import itertools
import logging
import math
from typing import (
    Optional,
    Sequence,
    Tuple,
    Union,
)

import attr
import numpy as np

from .config import get_tolerances
from .exceptions import (
    DimensionError,
    NonSymmetricError,
    NotNormalizedError,
    ParameterError,
    SizeLimitError,
)
from .types import ConfidenceValue, FockVector
from .utils import as_square, factorial, make_rng

__all__ = (
    'RepetitionSpec',
    'permanent_exact',
    'permanent_estimate',
    'hafnian_exact',
    'loop_hafnian_exact',
    'repeat_matrix',
    'repeat_symmetric',
    'gram_error_bound',
)

log = logging.getLogger('quantum.cvkit.matfun')

_LIMITS = {
    'naive': 9,
    'ryser': 20,
    'glynn': 20,
    'hafnian': 16,
    'loop_hafnian': 14,
    'gram': 8,
}


def _check_order(kind: str, n: int) -> None:
    if n > _LIMITS[kind]:
        raise SizeLimitError(kind, n, _LIMITS[kind])


def _permanent_naive(a: np.ndarray) -> complex:
    n = a.shape[0]
    rows = np.arange(n)
    return complex(sum(
        np.prod(a[rows, list(sigma)]) for sigma in itertools.permutations(range(n))
    ))


def _permanent_ryser(a: np.ndarray) -> complex:
    # Gray-code walk over column subsets, one column flipped per step.
    n = a.shape[0]
    rowsums = np.zeros(n, dtype=complex)
    total = 0j
    prev = 0
    for k in range(1, 1 << n):
        gray = k ^ (k >> 1)
        flipped = gray ^ prev
        j = flipped.bit_length() - 1
        if gray & flipped:
            rowsums += a[:, j]
        else:
            rowsums -= a[:, j]
        prev = gray
        term = np.prod(rowsums)
        total += -term if bin(gray).count('1') % 2 else term
    return complex((-1) ** n * total)


def _permanent_glynn(a: np.ndarray) -> complex:
    n = a.shape[0]
    total = 0j
    # first sign fixed to +1
    for signs in itertools.product((1.0, -1.0), repeat=n - 1):
        delta = np.array((1.0, *signs))
        total += np.prod(delta) * np.prod(a @ delta)
    return complex(total / 2 ** (n - 1))


def permanent_exact(matrix, method: str = 'ryser') -> complex:
    """
    The permanent of a square complex matrix.

    :param method: ``'ryser'`` (Gray-code inclusion–exclusion, order ≤ 20),
        ``'glynn'`` (full sign enumeration, order ≤ 20) or ``'naive'``
        (permutation sum, order ≤ 9).
    """
    a = as_square(matrix)
    n = a.shape[0]
    if n == 0:
        return 1 + 0j
    if method == 'naive':
        _check_order('naive', n)
        return _permanent_naive(a)
    if method == 'ryser':
        _check_order('ryser', n)
        return _permanent_ryser(a)
    if method == 'glynn':
        _check_order('glynn', n)
        return _permanent_glynn(a)
    raise ParameterError('unknown permanent method', method)


def permanent_estimate(
    matrix,
    samples: int,
    seed: Optional[int],
    failure: float = 0.05,
) -> ConfidenceValue:
    """
    Randomized Glynn estimator: the mean of ``Π_k δ_k Π_i (A δ)_i`` over
    uniform sign vectors δ.  Each term is bounded by ``‖A‖ⁿ`` (operator
    norm), which gives a Hoeffding bound on the real and imaginary parts.
    """
    a = as_square(matrix)
    n = a.shape[0]
    if samples < 1:
        raise ParameterError('sample count must be positive', samples)
    if not 0 < failure < 1:
        raise ParameterError('failure probability must be in (0, 1)', failure)
    if n == 0:
        return ConfidenceValue(1 + 0j, 0.0, 0.0)
    rng = make_rng(seed)
    delta = rng.choice((-1.0, 1.0), size=(samples, n))
    terms = np.prod(delta, axis=1) * np.prod(delta @ a.T, axis=1)
    estimate = complex(np.mean(terms))
    scale = float(np.linalg.norm(a, 2)) ** n
    bound = 2.0 * scale * math.sqrt(math.log(4.0 / failure) / samples)
    return ConfidenceValue(estimate, bound, failure)


def _symmetric(matrix, kind: str) -> np.ndarray:
    a = as_square(matrix)
    tol = get_tolerances().symmetry
    deviation = float(np.max(np.abs(a - a.T))) if a.size else 0.0
    if deviation > tol:
        raise NonSymmetricError(deviation, tol)
    _check_order(kind, a.shape[0])
    return (a + a.T) / 2


def hafnian_exact(matrix) -> complex:
    """
    The hafnian of a symmetric matrix of even order ≤ 16; odd orders give 0.

    The recursion pairs the lowest remaining index with every other one,
    memoized over the bitmask of remaining indices.
    """
    a = _symmetric(matrix, 'hafnian')
    n = a.shape[0]
    if n % 2:
        return 0j

    @functools.lru_cache(maxsize=None)
    def _haf(mask: int) -> complex:
        if mask == 0:
            return 1 + 0j
        i = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << i)
        total = 0j
        j_mask = rest
        while j_mask:
            j = (j_mask & -j_mask).bit_length() - 1
            j_mask &= j_mask - 1
            if a[i, j] != 0:
                total += a[i, j] * _haf(rest & ~(1 << j))
        return total

    return complex(_haf((1 << n) - 1))


def loop_hafnian_exact(matrix) -> complex:
    """
    The loop hafnian (sum over matchings with singletons weighted by the
    diagonal) of a symmetric matrix of order ≤ 14.
    """
    a = _symmetric(matrix, 'loop_hafnian')
    n = a.shape[0]

    @functools.lru_cache(maxsize=None)
    def _lhaf(mask: int) -> complex:
        if mask == 0:
            return 1 + 0j
        i = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << i)
        total = a[i, i] * _lhaf(rest)
        j_mask = rest
        while j_mask:
            j = (j_mask & -j_mask).bit_length() - 1
            j_mask &= j_mask - 1
            if a[i, j] != 0:
                total += a[i, j] * _lhaf(rest & ~(1 << j))
        return total

    return complex(_lhaf((1 << n) - 1))


def _as_counts(value: Sequence[int]) -> Tuple[int, ...]:
    counts = tuple(int(v) for v in value)
    if any(c < 0 for c in counts):
        raise ParameterError('negative repetition count', counts)
    return counts


@attr.define(slots=True, frozen=True)
class RepetitionSpec:
    """Row and column repetition counts of :func:`repeat_matrix`."""

    rows: Tuple[int, ...] = attr.field(converter=_as_counts)
    cols: Tuple[int, ...] = attr.field(converter=_as_counts)

    @property
    def shape(self) -> Tuple[int, int]:
        return sum(self.rows), sum(self.cols)


def _indices(counts: Sequence[int]) -> np.ndarray:
    return np.repeat(np.arange(len(counts)), counts)


def repeat_matrix(
    matrix, spec: Union[RepetitionSpec, Tuple[Sequence[int], Sequence[int]]],
) -> np.ndarray:
    """
    Repeats row i of *matrix* ``rows[i]`` times and column j ``cols[j]``
    times.
    """
    if not isinstance(spec, RepetitionSpec):
        spec = RepetitionSpec(*spec)
    a = np.asarray(matrix, dtype=complex)
    if a.ndim != 2 or len(spec.rows) != a.shape[0] or len(spec.cols) != a.shape[1]:
        raise DimensionError('repetition counts do not match the matrix', a.shape,
                             (len(spec.rows), len(spec.cols)))
    return a[np.ix_(_indices(spec.rows), _indices(spec.cols))]


def repeat_symmetric(matrix, diagonal, p: Sequence[int], q: Sequence[int]) -> np.ndarray:
    """
    Builds the symmetric argument of a Gaussian density loop hafnian: index
    k is repeated ``p[k]`` times and index ``m + k`` ``q[k]`` times, and
    the diagonal is replaced by the matching entries of *diagonal*.
    """
    v = as_square(matrix)
    d = np.asarray(diagonal, dtype=complex)
    p = _as_counts(p)
    q = _as_counts(q)
    m = len(p)
    if len(q) != m or v.shape[0] != 2 * m or d.shape != (2 * m,):
        raise DimensionError('expected a 2m×2m matrix and 2m diagonal', 2 * m, v.shape)
    idx = np.concatenate([_indices(p), m + _indices(q)]).astype(int)
    out = v[np.ix_(idx, idx)]
    out[np.diag_indices(idx.size)] = d[idx]
    return out


def gram_error_bound(states: Sequence[FockVector]) -> float:
    """
    ``Per(G)/m!`` of the Gram matrix ``G_kl = ⟨ψ_k|ψ_l⟩``: the lowest error
    probability of an identity test on ``|ψ_1⟩…|ψ_m⟩``. It is 1 for identical
    states and ``1/m!`` for pairwise orthogonal ones.
    """
    m = len(states)
    if m == 0:
        raise ParameterError('no states given')
    _check_order('gram', m)
    tol = get_tolerances().normalization
    for s in states:
        if abs(s.norm() ** 2 - 1.0) > tol:
            raise NotNormalizedError(s.norm() ** 2, tol)
    gram = np.array([[a.inner(b) for b in states] for a in states])
    value = permanent_exact(gram, 'ryser' if m > 1 else 'naive').real / factorial(m)
    return float(value)
