"""
Stellar functions of single-mode states: evaluation, zero counting by the
argument principle, core extraction and stellar robustness.
"""

from __future__ import annotations

import enum
import logging
import math
import warnings
from typing import (
    Callable,
    List,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import attr
import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.optimize import minimize
from scipy.stats import qmc

from .config import get_config, get_tolerances
from .exceptions import (
    ContourError,
    ConvergenceWarning,
    ParameterError,
    SizeLimitError,
)
from .fock import gaussian_unitary_matrix
from .types import CoreState, FockVector
from .utils import parallel_map

__all__ = (
    'StellarVariant',
    'StellarSpec',
    'Rectangle',
    'Circle',
    'RobustnessResult',
    'stellar_polynomial',
    'stellar_eval',
    'count_zeros',
    'extract_core',
    'robustness',
    'robustness_profile',
    'cat_robustness',
    'cat_robustness_profile',
    'optimal_approximation',
    'hermite',
)

log = logging.getLogger('quantum.cvkit.stellar')

_SQRT_PI = math.sqrt(math.pi)
_MAX_SQUEEZING = 20.0
_MAX_CORE_DEGREE = 8
_MAX_CORE_RANK = 8
_MAX_CAT_AMPLITUDE = 10.0
_MAX_CAT_RANK = 12
_MAX_HERMITE_ORDER = 200
_MIN_GKP_TRUNCATION = 3


class StellarVariant(enum.Enum):
    CORE = 'core'
    GAUSSIAN = 'gaussian'
    CAT = 'cat'
    GKP = 'gkp'
    GAUSSIAN_CORE = 'gaussian-core'


def _squeeze(xi: complex) -> Tuple[float, float, complex]:
    r = abs(xi)
    phase = np.exp(1j * np.angle(xi)) if r > 0 else 1.0 + 0j
    return math.cosh(r), math.sinh(r), complex(phase)


def _gaussian_exponent(xi: complex, alpha: complex) -> Tuple[complex, complex, complex]:
    """``(a, b, log prefactor)`` of ``exp(−½az² + bz + c0) / √cosh r``."""
    c, s, phase = _squeeze(xi)
    t = s / c
    a = t / phase
    b = alpha / c
    c0 = 0.5 * t * phase * alpha ** 2 - 0.5 * abs(alpha) ** 2 - 0.5 * math.log(c)
    return a, b, c0


def _ladder(poly: np.ndarray, xi: complex, alpha: complex) -> np.ndarray:
    # P ↦ z P / c + s e^{iθ} P′ + (s e^{iθ} α / c − α*) P
    c, s, phase = _squeeze(xi)
    out = np.zeros(poly.size + 1, dtype=complex)
    out[1:] += poly / c
    if poly.size > 1:
        out[:poly.size - 1] += s * phase * npoly.polyder(poly)
    out[:poly.size] += (s * phase * alpha / c - np.conj(alpha)) * poly
    return out


def stellar_polynomial(core: CoreState, xi: complex, alpha: complex) -> np.ndarray:
    """
    Monomial coefficients of the polynomial factor P with
    ``F_{Ŝ(ξ)D̂(α)|C⟩}(z) = P(z) G_{ξ,α}(z)``.
    """
    coeffs = core.coefficients
    result = np.zeros(coeffs.size, dtype=complex)
    current = np.ones(1, dtype=complex)
    for k, ck in enumerate(coeffs):
        if k > 0:
            current = _ladder(current, xi, alpha) / math.sqrt(k)
        result[:current.size] += ck * current
    return result


@attr.define(slots=True, frozen=True, eq=False)
class StellarSpec:
    """
    A single-mode state described through its stellar function.  Use the
    classmethod constructors rather than the raw fields.
    """

    variant: StellarVariant = attr.field()
    polynomial: np.ndarray = attr.field(factory=lambda: np.ones(1, dtype=complex))
    xi: complex = attr.field(default=0j)
    alpha: complex = attr.field(default=0j)
    sign: int = attr.field(default=1)
    truncation: int = attr.field(default=5)

    @classmethod
    def core(cls, core: Union[CoreState, Sequence[complex]]) -> StellarSpec:
        if not isinstance(core, CoreState):
            core = CoreState(core)
        return cls(StellarVariant.CORE, polynomial=core.polynomial())

    @classmethod
    def gaussian(cls, xi: complex, alpha: complex) -> StellarSpec:
        return cls(StellarVariant.GAUSSIAN, xi=complex(xi), alpha=complex(alpha))

    @classmethod
    def gaussian_core(
        cls, core: Union[CoreState, Sequence[complex]], xi: complex, alpha: complex,
    ) -> StellarSpec:
        if not isinstance(core, CoreState):
            core = CoreState(core)
        poly = stellar_polynomial(core.normalized(), complex(xi), complex(alpha))
        return cls(StellarVariant.GAUSSIAN_CORE, polynomial=poly, xi=complex(xi), alpha=complex(alpha))

    @classmethod
    def cat(cls, alpha: complex, sign: int = 1) -> StellarSpec:
        if sign not in (1, -1):
            raise ParameterError('cat parity must be +1 or -1', sign)
        if sign < 0 and alpha == 0:
            raise ParameterError('the odd cat state needs α ≠ 0')
        return cls(StellarVariant.CAT, alpha=complex(alpha), sign=sign)

    @classmethod
    def gkp(cls, truncation: int = None) -> StellarSpec:
        if truncation is None:
            truncation = get_config().gkp_truncation
        if truncation < _MIN_GKP_TRUNCATION:
            raise ParameterError('GKP truncation must be at least 3', truncation)
        return cls(StellarVariant.GKP, truncation=truncation)


def _gkp_terms(z: np.ndarray, truncation: int, derivative: bool) -> np.ndarray:
    out = np.empty(z.shape, dtype=complex)
    flat_z = z.ravel()
    flat_out = out.ravel()
    chunk = 2048
    for start in range(0, flat_z.size, chunk):
        block = flat_z[start:start + chunk]
        reach = int(math.ceil(np.max(np.abs(block), initial=0.0) / (2 * _SQRT_PI))) + 5
        lim = max(truncation, reach)
        s, t = np.meshgrid(np.arange(-lim, lim + 1), np.arange(-lim, lim + 1), indexing='ij')
        s = s.ravel()
        t = t.ravel()
        lattice = s + 1j * t
        sign = np.where((s * t) % 2 == 0, 1.0, -1.0)
        exponent = -2 * math.pi * (s ** 2 + t ** 2) + 2 * _SQRT_PI * np.outer(block, lattice)
        weights = sign * (2 * _SQRT_PI * lattice if derivative else 1.0)
        flat_out[start:start + block.size] = np.exp(exponent) @ weights
    return out


def stellar_eval(spec: StellarSpec, z) -> np.ndarray:
    """
    Evaluates the stellar function at *z* (scalar or array).  The GKP
    variant is left unnormalized.
    """
    z = np.asarray(z, dtype=complex)
    v = spec.variant
    if v is StellarVariant.CORE:
        return npoly.polyval(z, spec.polynomial)
    if v in (StellarVariant.GAUSSIAN, StellarVariant.GAUSSIAN_CORE):
        a, b, c0 = _gaussian_exponent(spec.xi, spec.alpha)
        g = np.exp(-0.5 * a * z ** 2 + b * z + c0)
        if v is StellarVariant.GAUSSIAN:
            return g
        return npoly.polyval(z, spec.polynomial) * g
    if v is StellarVariant.CAT:
        alpha = spec.alpha
        if spec.sign > 0:
            return np.cosh(alpha * z) / math.sqrt(math.cosh(abs(alpha) ** 2))
        return np.sinh(alpha * z) / math.sqrt(math.sinh(abs(alpha) ** 2))
    return _gkp_terms(z, spec.truncation, derivative=False)


def _log_derivative(spec: StellarSpec, z: np.ndarray) -> np.ndarray:
    v = spec.variant
    if v is StellarVariant.CORE:
        return npoly.polyval(z, npoly.polyder(spec.polynomial)) / npoly.polyval(z, spec.polynomial)
    if v in (StellarVariant.GAUSSIAN, StellarVariant.GAUSSIAN_CORE):
        a, b, _ = _gaussian_exponent(spec.xi, spec.alpha)
        base = -a * z + b
        if v is StellarVariant.GAUSSIAN:
            return base
        poly = spec.polynomial
        return base + npoly.polyval(z, npoly.polyder(poly)) / npoly.polyval(z, poly)
    if v is StellarVariant.CAT:
        alpha = spec.alpha
        if spec.sign > 0:
            return alpha * np.tanh(alpha * z)
        return alpha / np.tanh(alpha * z)
    return _gkp_terms(z, spec.truncation, True) / _gkp_terms(z, spec.truncation, False)


@attr.define(slots=True, frozen=True)
class Rectangle:
    """An axis-aligned rectangle traversed counterclockwise."""

    corner: complex = attr.field(converter=complex)
    width: float = attr.field(converter=float)
    height: float = attr.field(converter=float)

    @property
    def center(self) -> complex:
        return self.corner + complex(self.width, self.height) / 2

    def vertices(self) -> List[complex]:
        c = self.corner
        return [c, c + self.width, c + complex(self.width, self.height), c + 1j * self.height]

    def nodes(self, points: int) -> Tuple[np.ndarray, np.ndarray]:
        """Trapezoid nodes and weights (including dz) with *points* intervals per side."""
        zs, ws = [], []
        verts = self.vertices()
        u = np.linspace(0.0, 1.0, points + 1)
        w = np.full(points + 1, 1.0 / points)
        w[0] = w[-1] = 0.5 / points
        for start, end in zip(verts, verts[1:] + verts[:1]):
            zs.append(start + (end - start) * u)
            ws.append((end - start) * w)
        return np.concatenate(zs), np.concatenate(ws)

    def enlarged(self, factor: float) -> Rectangle:
        w, h = self.width * factor, self.height * factor
        return Rectangle(self.center - complex(w, h) / 2, w, h)


@attr.define(slots=True, frozen=True)
class Circle:

    center: complex = attr.field(converter=complex)
    radius: float = attr.field(converter=float)

    def nodes(self, points: int) -> Tuple[np.ndarray, np.ndarray]:
        n = 4 * points
        theta = 2 * math.pi * np.arange(n) / n
        z = self.center + self.radius * np.exp(1j * theta)
        return z, 1j * (z - self.center) * (2 * math.pi / n)

    def enlarged(self, factor: float) -> Circle:
        return Circle(self.center, self.radius * factor)


Contour = Union[Rectangle, Circle]


def _touches_zero(spec: StellarSpec, z: np.ndarray) -> bool:
    envelope = np.abs(stellar_eval(spec, z)) * np.exp(-0.5 * np.abs(z) ** 2)
    top = float(np.max(envelope))
    if top == 0.0 or not math.isfinite(top):
        return True
    return float(np.min(envelope)) < get_tolerances().contour * top


def _winding(spec: StellarSpec, contour: Contour, start_points: int) -> int:
    config = get_config()
    tol = get_tolerances().residue
    points = start_points
    previous: Optional[int] = None
    value = complex('nan')
    while points <= config.quad_max_points:
        z, w = contour.nodes(points)
        if _touches_zero(spec, z):
            raise _TouchingZero()
        value = complex(np.sum(_log_derivative(spec, z) * w) / (2j * math.pi))
        rounded = int(round(value.real))
        residual = abs(value - rounded)
        log.debug('winding integral with %d points per side: %s', points, value)
        if previous == rounded and residual < tol:
            return rounded
        previous = rounded
        points *= 2
    raise ContourError('non-integer residue', value)


class _TouchingZero(Exception):
    pass


def count_zeros(spec: StellarSpec, contour: Contour, quadrature_points: int = None) -> int:
    """
    Counts the zeros of the stellar function enclosed by *contour* as the
    winding number ``(1/2πi) ∮ F′/F dz``, doubling the trapezoid nodes until
    the rounded value repeats.  A contour passing through a zero is
    enlarged by 1% and retried.
    """
    config = get_config()
    start = quadrature_points if quadrature_points is not None else config.quad_min_points
    if start < 1:
        raise ParameterError('quadrature points must be positive', start)
    for attempt in range(config.contour_retries + 1):
        try:
            return _winding(spec, contour, start)
        except _TouchingZero:
            log.warning('contour touches a zero (attempt %d); enlarging', attempt + 1)
            contour = contour.enlarged(1.01)
    raise ContourError('contour passes through a zero')


def extract_core(polynomial: Sequence[complex], xi: complex, alpha: complex) -> CoreState:
    """
    Recovers the normalized core state C of a state whose stellar function
    is ``P(z) G_{ξ,α}(z)``, by substituting
    ``z ↦ c z − s e^{iθ} ∂ + c α* − s e^{iθ} α`` into P and acting on 1.
    """
    poly = np.asarray(polynomial, dtype=complex)
    if poly.ndim != 1 or not np.any(poly):
        raise ParameterError('the polynomial must be nonzero')
    c, s, phase = _squeeze(xi)
    shift = c * np.conj(alpha) - s * phase * alpha

    def _apply(p: np.ndarray) -> np.ndarray:
        out = np.zeros(p.size + 1, dtype=complex)
        out[1:] += c * p
        if p.size > 1:
            out[:p.size - 1] -= s * phase * npoly.polyder(p)
        out[:p.size] += shift * p
        return out

    result = np.zeros(poly.size, dtype=complex)
    current = np.ones(1, dtype=complex)
    for k, pk in enumerate(poly):
        if k > 0:
            current = _apply(current)
        result[:current.size] += pk * current
    return CoreState.from_polynomial(result).normalized()


@attr.define(slots=True, frozen=True)
class RobustnessResult:
    """
    Attributes:
        value: The robustness ``R_k = √(1 − F_max)``.
        max_fidelity: The best fidelity with a state of rank below k.
        xi: The optimal squeezing parameter.
        alpha: The optimal displacement.
        converged: Whether the best optimizer run met its tolerance.
    """

    rank: int
    value: float
    max_fidelity: float
    xi: complex
    alpha: complex
    converged: bool


Objective = Callable[[complex, complex], float]


_START_SQUEEZING = 2.0


def _displacement_radius(alpha: complex = 0j) -> float:
    return max(2.0, 2.0 * abs(alpha))


def _halton_starts(count: int, displacement: float = 2.0) -> np.ndarray:
    """Quasi-random starts with ``|ξ| ≤ 2`` and ``|α| ≤ displacement``."""
    points = qmc.Halton(d=4, scramble=False).random(count)
    r = _START_SQUEEZING * points[:, 0]
    theta = 2 * math.pi * points[:, 1]
    rho = displacement * points[:, 2]
    phi = 2 * math.pi * points[:, 3]
    return np.column_stack([r * np.cos(theta), r * np.sin(theta), rho * np.cos(phi), rho * np.sin(phi)])


def _maximize(
    objective: Objective,
    rank: int,
    restarts: int = None,
    warm: Sequence[Tuple[complex, complex]] = (),
    displacement: float = 2.0,
) -> RobustnessResult:
    tol = get_tolerances().optimizer
    count = restarts if restarts is not None else get_config().restarts
    starts = [np.array([w[0].real, w[0].imag, w[1].real, w[1].imag]) for w in warm]
    starts.extend(_halton_starts(count, displacement))

    def _loss(x: np.ndarray) -> float:
        xi = complex(x[0], x[1])
        if abs(xi) > _MAX_SQUEEZING:
            return 0.0
        return -objective(xi, complex(x[2], x[3]))

    def _run(x0: np.ndarray):
        return minimize(
            _loss, x0, method='Nelder-Mead',
            options={'xatol': tol, 'fatol': tol, 'maxiter': 8000, 'maxfev': 16000},
        )

    results = parallel_map(_run, starts)
    best = min(results, key=lambda res: res.fun)
    log.debug('best of %d restarts: %.12f (success=%s)', len(results), -best.fun, best.success)
    if not best.success:
        warnings.warn(f'robustness optimizer did not converge: {best.message}', ConvergenceWarning)
    fidelity = min(1.0, max(0.0, -float(best.fun)))
    return RobustnessResult(
        rank=rank,
        value=math.sqrt(1.0 - fidelity),
        max_fidelity=fidelity,
        xi=complex(best.x[0], best.x[1]),
        alpha=complex(best.x[2], best.x[3]),
        converged=bool(best.success),
    )


def _core_objective(core: CoreState, k: int) -> Objective:
    coeffs = core.coefficients.conj()
    rows = coeffs.size

    def _objective(xi: complex, alpha: complex) -> float:
        block = gaussian_unitary_matrix(xi, alpha, rows, k)
        return float(np.sum(np.abs(coeffs @ block) ** 2))

    return _objective


def robustness(
    core: Union[CoreState, Sequence[complex]],
    k: int,
    restarts: int = None,
    warm: Sequence[Tuple[complex, complex]] = (),
) -> RobustnessResult:
    """
    The k-robustness of a core state: maximizes
    ``Σ_{m<k} |⟨C|Ŝ(ξ)D̂(α)|m⟩|²`` over ``(ξ, α)`` by Nelder–Mead from
    quasi-random starting points, and returns ``√(1 − max)``.
    """
    if not isinstance(core, CoreState):
        core = CoreState(core)
    if k < 1:
        raise ParameterError('k must be positive', k)
    if k > _MAX_CORE_RANK:
        raise SizeLimitError('robustness rank', k, _MAX_CORE_RANK)
    if core.degree > _MAX_CORE_DEGREE:
        raise SizeLimitError('core degree', core.degree, _MAX_CORE_DEGREE)
    core = core.normalized()
    if k > core.degree:
        return RobustnessResult(k, 0.0, 1.0, 0j, 0j, True)
    return _maximize(_core_objective(core, k), k, restarts, warm, _displacement_radius())


def robustness_profile(
    core: Union[CoreState, Sequence[complex]],
    kmax: int,
    restarts: int = None,
) -> List[RobustnessResult]:
    """``R_1 … R_kmax``, each optimization warm-started from the previous optimum."""
    results: List[RobustnessResult] = []
    for k in range(1, kmax + 1):
        warm = [(results[-1].xi, results[-1].alpha)] if results else []
        results.append(robustness(core, k, restarts, warm))
    return results


def _hermite_amplitudes(xi: complex, alpha: complex, size: int) -> np.ndarray:
    """``⟨n|Ŝ(ξ)|α⟩ = G₀ a^{n/2} He_n(b/√a) / √n!`` for ``n < size``."""
    a, b, c0 = _gaussian_exponent(xi, alpha)
    roots = np.sqrt([float(math.factorial(n)) for n in range(size)])
    if abs(a) < 1e-14:
        return np.exp(c0) * b ** np.arange(size) / roots
    root = np.sqrt(complex(a))
    terms = [root ** n * hermite(n, b / root) for n in range(size)]
    return np.exp(c0) * np.array(terms, dtype=complex) / roots


def _cat_objective(alpha: complex, sign: int, k: int) -> Objective:
    norm = 1.0 / math.sqrt(2.0 * (1.0 + sign * math.exp(-2.0 * abs(alpha) ** 2)))

    def _branch(xi: complex, beta: complex, a: complex) -> np.ndarray:
        phase = np.exp(0.5 * (beta * np.conj(a) - np.conj(beta) * a))
        return phase * _hermite_amplitudes(xi, beta + a, k)

    def _objective(xi: complex, beta: complex) -> float:
        amps = _branch(xi, beta, alpha) + sign * _branch(xi, beta, -alpha)
        return float(np.sum(np.abs(norm * amps) ** 2))

    return _objective


def cat_robustness(
    alpha: complex,
    sign: int,
    k: int,
    restarts: int = None,
    warm: Sequence[Tuple[complex, complex]] = (),
) -> RobustnessResult:
    """
    The k-robustness of the cat state ``∝ |α⟩ ± |−α⟩`` from exact
    squeezed-coherent amplitudes.
    """
    StellarSpec.cat(alpha, sign)
    if abs(alpha) > _MAX_CAT_AMPLITUDE:
        raise ParameterError('cat amplitude must satisfy |α| ≤ 10', alpha)
    if k < 1:
        raise ParameterError('k must be positive', k)
    if k > _MAX_CAT_RANK:
        raise SizeLimitError('cat robustness rank', k, _MAX_CAT_RANK)
    return _maximize(
        _cat_objective(complex(alpha), sign, k), k, restarts, warm, _displacement_radius(alpha),
    )


def cat_robustness_profile(
    alpha: complex, sign: int, kmax: int, restarts: int = None,
) -> List[RobustnessResult]:
    results: List[RobustnessResult] = []
    for k in range(1, kmax + 1):
        warm = [(results[-1].xi, results[-1].alpha)] if results else []
        results.append(cat_robustness(alpha, sign, k, restarts, warm))
    return results


def optimal_approximation(
    core: Union[CoreState, Sequence[complex]],
    result: RobustnessResult,
    cutoff: int,
) -> FockVector:
    """
    The rank-below-k state ``Ĝ Π_{<k} Ĝ†|C⟩`` (normalized) reaching the
    fidelity of *result*, truncated at *cutoff* photons.
    """
    if not isinstance(core, CoreState):
        core = CoreState(core)
    core = core.normalized()
    k = result.rank
    rows = max(core.coefficients.size, cutoff + 1)
    block = gaussian_unitary_matrix(result.xi, result.alpha, rows, k)
    padded = np.zeros(rows, dtype=complex)
    padded[:core.coefficients.size] = core.coefficients
    inner = block.conj().T @ padded
    norm = np.linalg.norm(inner)
    if norm == 0:
        raise ParameterError('the optimum has no overlap with the core state')
    amps = block[:cutoff + 1] @ (inner / norm)
    return FockVector(1, cutoff, {(n,): a for n, a in enumerate(amps) if a != 0})


def hermite(n: int, z: Union[complex, np.ndarray]) -> Union[complex, np.ndarray]:
    """Probabilists' Hermite polynomial ``He_n(z)``."""
    if n < 0:
        raise ParameterError('negative order', n)
    if n > _MAX_HERMITE_ORDER:
        raise SizeLimitError('Hermite order', n, _MAX_HERMITE_ORDER)
    prev = np.ones_like(np.asarray(z, dtype=complex))
    if n == 0:
        return prev if np.ndim(z) else complex(prev)
    cur = np.asarray(z, dtype=complex)
    for k in range(1, n):
        prev, cur = cur, z * cur - k * prev
    return cur if np.ndim(z) else complex(cur)
