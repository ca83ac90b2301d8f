import functools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import (
    Callable,
    Iterable,
    List,
    Optional,
    Sequence,
    TypeVar,
)

import numpy as np
from scipy.special import gammaln
from tqdm import tqdm

from .config import get_config, get_tolerances
from .exceptions import DimensionError, NotUnitaryError

log = logging.getLogger('quantum.cvkit.utils')

T = TypeVar('T')
R = TypeVar('R')


def make_rng(seed: Optional[int]) -> np.random.Generator:
    return np.random.default_rng(seed)


@functools.lru_cache(maxsize=None)
def factorial(n: int) -> float:
    return float(math.factorial(n))


def multi_factorial(occupation: Iterable[int]) -> float:
    """Π nᵢ! of an occupation tuple."""
    result = 1.0
    for n in occupation:
        result *= factorial(n)
    return result


def log_binom(n: float, k: float) -> float:
    """
    ``log C(n, k)`` that stays accurate when *n* is astronomically larger
    than *k*.
    """
    if k < 0 or k > n:
        return -math.inf
    if n < 1e7:
        return float(gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1))
    # log n!/(n-k)! from the Stirling difference, with log1p for the
    # small ratio k/n.
    falling = k * math.log(n) - k - (n - k + 0.5) * math.log1p(-k / n)
    return falling - float(gammaln(k + 1))


def as_square(matrix, name: str = 'matrix') -> np.ndarray:
    a = np.asarray(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f'{name} must be square', 'square', a.shape)
    return a


def unitarity_deviation(u: np.ndarray) -> float:
    return float(np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0]))))


def check_unitary(matrix, tolerance: float = None) -> np.ndarray:
    u = as_square(matrix, 'unitary')
    tol = tolerance if tolerance is not None else get_tolerances().unitarity
    deviation = unitarity_deviation(u)
    if deviation > tol:
        raise NotUnitaryError(deviation, tol)
    return u


def check_orthogonal(matrix, tolerance: float = None) -> np.ndarray:
    o = np.asarray(matrix)
    tol = tolerance if tolerance is not None else get_tolerances().orthogonality
    if o.ndim != 2 or o.shape[0] != o.shape[1]:
        raise DimensionError('orthogonal matrix must be square', 'square', o.shape)
    if np.max(np.abs(np.imag(o))) > tol:
        raise NotUnitaryError(float(np.max(np.abs(np.imag(o)))), tol)
    o = np.real(o)
    deviation = float(np.max(np.abs(o @ o.T - np.eye(o.shape[0]))))
    if deviation > tol:
        raise NotUnitaryError(deviation, tol)
    return o


def direct_sum(*blocks: np.ndarray) -> np.ndarray:
    size = sum(b.shape[0] for b in blocks)
    result = np.zeros((size, size), dtype=complex)
    offset = 0
    for b in blocks:
        k = b.shape[0]
        result[offset:offset + k, offset:offset + k] = b
        offset += k
    return result


def parallel_map(
    fn: Callable[[T], R],
    items: Sequence[T],
    *,
    desc: str = None,
    progress: bool = False,
) -> List[R]:
    """
    Maps *fn* over *items* with up to ``CVKIT_THREADS`` workers.
    The results keep the order of *items*.
    """
    threads = min(get_config().threads, max(len(items), 1))
    bar = tqdm(total=len(items), desc=desc, leave=False) if progress else None
    try:
        if threads <= 1:
            results = []
            for item in items:
                results.append(fn(item))
                if bar is not None:
                    bar.update(1)
            return results
        log.debug('mapping %d jobs over %d threads', len(items), threads)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(fn, item) for item in items]
            results = []
            for f in futures:
                results.append(f.result())
                if bar is not None:
                    bar.update(1)
            return results
    finally:
        if bar is not None:
            bar.close()
