"""
Gaussian states in the complex (a, a†) basis, their Husimi densities, and
output densities of Gaussian circuits fed with core states.
"""

from __future__ import annotations

import cmath
import logging
import math
import warnings
from typing import (
    List,
    Sequence,
    Tuple,
    Union,
)

import attr
import numpy as np
import scipy.linalg

from .config import get_tolerances
from .exceptions import (
    ClampWarning,
    DimensionError,
    IllConditionedError,
    NegativeDensityError,
    ParameterError,
)
from .matfun import hafnian_exact, loop_hafnian_exact, repeat_symmetric
from .types import FockVector
from .utils import check_orthogonal, check_unitary, multi_factorial

__all__ = (
    'GaussianState',
    'Squeeze',
    'Passive',
    'Displace',
    'GaussianCircuit',
    'CvsCircuit',
    'vacuum',
    'coherent',
    'evolve_covariance',
    'evolve',
    'inverse_elements',
    'husimi_gaussian',
    'gcore_density',
    'cvs_origin_density',
    'embed_orthogonal',
)

log = logging.getLogger('quantum.cvkit.gaussian')


def _complex_vector(value) -> np.ndarray:
    return np.atleast_1d(np.asarray(value, dtype=complex))


@attr.define(slots=True, frozen=True, eq=False)
class GaussianState:
    """
    A Gaussian state given by its ``2m×2m`` covariance matrix in the
    ``(a, a†)`` basis and its mean ``⟨a⟩``.  The vacuum has ``V = I/2``.
    """

    covariance: np.ndarray = attr.field(converter=lambda v: np.asarray(v, dtype=complex))
    displacement: np.ndarray = attr.field(converter=_complex_vector)

    def __attrs_post_init__(self) -> None:
        m = self.displacement.size
        if self.covariance.shape != (2 * m, 2 * m):
            raise DimensionError('covariance must be 2m×2m', (2 * m, 2 * m), self.covariance.shape)

    @property
    def modes(self) -> int:
        return self.displacement.size

    @property
    def mean_vector(self) -> np.ndarray:
        """``d̃ = (d, d*)``"""
        return np.concatenate([self.displacement, self.displacement.conj()])


@attr.define(slots=True, frozen=True, eq=False)
class Squeeze:
    """Single-mode squeezers ``Ŝ(ξ_j) = exp(½(ξ_j a_j² − ξ_j* a_j†²))``."""

    xi: np.ndarray = attr.field(converter=_complex_vector)

    def symplectic(self, modes: int) -> np.ndarray:
        xi = np.broadcast_to(self.xi, (modes,))
        r = np.abs(xi)
        phase = np.exp(1j * np.angle(xi))
        c = np.diag(np.cosh(r)).astype(complex)
        s = np.sinh(r)
        return np.block([
            [c, np.diag(-s / phase)],
            [np.diag(-s * phase), c],
        ])

    def inverse(self) -> Squeeze:
        return Squeeze(-self.xi)


@attr.define(slots=True, frozen=True, eq=False)
class Passive:
    """A passive interferometer, ``Û a†_j Û† = Σ_k u_kj a†_k``."""

    unitary: np.ndarray = attr.field(converter=lambda u: np.asarray(u, dtype=complex))

    def symplectic(self, modes: int) -> np.ndarray:
        u = check_unitary(self.unitary)
        if u.shape[0] != modes:
            raise DimensionError('interferometer size', modes, u.shape[0])
        zero = np.zeros_like(u)
        return np.block([[u, zero], [zero, u.conj()]])

    def inverse(self) -> Passive:
        return Passive(self.unitary.conj().T)


@attr.define(slots=True, frozen=True, eq=False)
class Displace:

    alpha: np.ndarray = attr.field(converter=_complex_vector)

    def inverse(self) -> Displace:
        return Displace(-self.alpha)


Element = Union[Squeeze, Passive, Displace]


@attr.define(slots=True, frozen=True)
class GaussianCircuit:
    """Gaussian elements applied left to right on *modes* modes."""

    modes: int = attr.field()
    elements: Tuple[Element, ...] = attr.field(converter=tuple)


def vacuum(modes: int) -> GaussianState:
    return GaussianState(np.eye(2 * modes) / 2, np.zeros(modes))


def coherent(alpha: Sequence[complex]) -> GaussianState:
    alpha = _complex_vector(alpha)
    return GaussianState(np.eye(2 * alpha.size) / 2, alpha)


def evolve_covariance(state: GaussianState, element: Element) -> GaussianState:
    """
    Applies one Gaussian element: ``V ↦ S V S†`` and ``d̃ ↦ S d̃`` for
    squeezers and interferometers, ``d ↦ d + α`` for displacements.
    """
    m = state.modes
    if isinstance(element, Displace):
        shift = np.broadcast_to(element.alpha, (m,))
        return GaussianState(state.covariance, state.displacement + shift)
    if isinstance(element, Squeeze) and element.xi.size not in (1, m):
        raise DimensionError('squeezing parameters per mode', m, element.xi.size)
    s = element.symplectic(m)
    cov = s @ state.covariance @ s.conj().T
    cov = (cov + cov.conj().T) / 2
    mean = s @ state.mean_vector
    return GaussianState(cov, mean[:m])


def evolve(state: GaussianState, elements: Sequence[Element]) -> GaussianState:
    for element in elements:
        state = evolve_covariance(state, element)
    return state


def inverse_elements(elements: Sequence[Element]) -> List[Element]:
    return [e.inverse() for e in reversed(elements)]


def _factorize(sigma: np.ndarray):
    limit = get_tolerances().condition
    cond = float(np.linalg.cond(sigma))
    if not math.isfinite(cond) or cond > limit:
        raise IllConditionedError(cond, limit)
    lu, piv = scipy.linalg.lu_factor(sigma)
    sign = (-1) ** int(np.sum(piv != np.arange(piv.size)))
    det = complex(sign * np.prod(np.diag(lu)))
    return (lu, piv), det.real


def husimi_gaussian(state: GaussianState, beta: Sequence[complex]) -> float:
    """
    ``Q(β) = exp[−½(β̃−d̃)†(V+I/2)⁻¹(β̃−d̃)] / (π^m √det(V+I/2))``.
    """
    beta = _complex_vector(beta)
    m = state.modes
    if beta.size != m:
        raise DimensionError('point dimension', m, beta.size)
    sigma = state.covariance + np.eye(2 * m) / 2
    factor, det = _factorize(sigma)
    diff = np.concatenate([beta, beta.conj()]) - state.mean_vector
    quad = diff.conj() @ scipy.linalg.lu_solve(factor, diff)
    return float(math.exp(-0.5 * quad.real) / (math.pi ** m * math.sqrt(det)))


def _clamp_density(value: float, what: str) -> float:
    if value >= 0:
        return value
    tol = get_tolerances().clamp
    if value < -tol:
        raise NegativeDensityError(what, value, tol)
    log.debug('%s evaluated to %.3e; clamped at 0', what, value)
    warnings.warn(f'{what} evaluated to {value:.3e}; clamped at 0', ClampWarning)
    return 0.0


def gcore_density(
    circuit: GaussianCircuit,
    core: FockVector,
    point: Sequence[complex],
) -> float:
    """
    The heterodyne density at *point* of ``Ĝ|C⟩`` for a Gaussian circuit
    Ĝ and a multimode core state C:

    ``κ Σ_{p,q} c_p c_q* lHaf(A_{p,q}) / √(p! q!)``

    where ``(V, d̃)`` describe ``Ĝ†|α⟩``, ``M = (V + I/2)⁻¹``, the matrix
    part of A is ``X(I − M)`` and its diagonal is ``Mᵀ d̃*``.
    """
    m = circuit.modes
    alpha = _complex_vector(point)
    if alpha.size != m or core.modes != m:
        raise DimensionError('mode counts of circuit, core and point', m, (core.modes, alpha.size))
    phi = evolve(coherent(alpha), inverse_elements(circuit.elements))
    sigma = phi.covariance + np.eye(2 * m) / 2
    factor, det = _factorize(sigma)
    inv = scipy.linalg.lu_solve(factor, np.eye(2 * m, dtype=complex))
    mean = phi.mean_vector
    kappa = math.exp(-0.5 * (mean.conj() @ inv @ mean).real) / (math.pi ** m * math.sqrt(det))
    swap = np.block([
        [np.zeros((m, m)), np.eye(m)],
        [np.eye(m), np.zeros((m, m))],
    ])
    vmat = swap @ (np.eye(2 * m) - inv)
    vmat = (vmat + vmat.T) / 2
    diag = inv.T @ mean.conj()
    total = 0j
    items = list(core.amplitudes.items())
    for p, cp in items:
        for q, cq in items:
            a = repeat_symmetric(vmat, diag, p, q)
            total += cp * cq.conjugate() * loop_hafnian_exact(a) / math.sqrt(
                multi_factorial(p) * multi_factorial(q))
    return _clamp_density(kappa * total.real, 'core-circuit density')


@attr.define(slots=True, frozen=True, eq=False)
class CvsCircuit:
    """
    Squeezed-input interferometer ``U = O e^{iφΣ}`` measured with
    unbalanced heterodyne detection.  In the squeezing convention of
    this circuit family ``Ŝ(ξ)`` squeezes the opposite quadrature, so the
    equivalent element list is ``[Squeeze(−ξ), Passive(U), Squeeze(ζ)]``.
    """

    modes: int = attr.field()
    photons: int = attr.field()
    xi: float = attr.field(converter=float)
    zeta: float = attr.field(converter=float)
    phi: float = attr.field(converter=float)
    sigma: np.ndarray = attr.field(converter=np.asarray)
    orthogonal: np.ndarray = attr.field(converter=np.asarray)

    def __attrs_post_init__(self) -> None:
        m, n = self.modes, self.photons
        if n < 0 or m < 2 * n:
            raise ParameterError('a CVS circuit needs m ≥ 2n', m, n)
        sigma = check_orthogonal(self.sigma)
        if sigma.shape[0] != m:
            raise DimensionError('Σ size', m, sigma.shape[0])
        tol = get_tolerances().orthogonality
        if float(np.max(np.abs(sigma - sigma.T))) > tol:
            raise ParameterError('Σ must be symmetric')
        o = check_orthogonal(self.orthogonal)
        if o.shape[0] != m:
            raise DimensionError('O size', m, o.shape[0])

    def unitary(self) -> np.ndarray:
        sigma = np.real(self.sigma)
        rotation = math.cos(self.phi) * np.eye(self.modes) + 1j * math.sin(self.phi) * sigma
        return np.real(self.orthogonal) @ rotation

    def elements(self) -> List[Element]:
        return [Squeeze(-self.xi), Passive(self.unitary()), Squeeze(self.zeta)]

    def circuit(self) -> GaussianCircuit:
        return GaussianCircuit(self.modes, self.elements())

    def core(self) -> FockVector:
        occ = (1,) * self.photons + (0,) * (self.modes - self.photons)
        return FockVector(self.modes, 1, {occ: 1.0})


def cvs_origin_density(circuit: CvsCircuit) -> float:
    """
    The output density at the origin:
    ``κ · Haf(Σ_n)²`` with
    ``κ = 2^{m/2} sinh(2ζ)ⁿ sin(2φ)ⁿ / (π^m B^{n+m/2})`` and
    ``B = 1 + cosh2ξ cosh2ζ − sinh2ξ sinh2ζ cos2φ``.
    """
    m, n = circuit.modes, circuit.photons
    xi, zeta, phi = circuit.xi, circuit.zeta, circuit.phi
    base = 1 + math.cosh(2 * xi) * math.cosh(2 * zeta) \
        - math.sinh(2 * xi) * math.sinh(2 * zeta) * math.cos(2 * phi)
    kappa = 2 ** (m / 2) * (math.sinh(2 * zeta) * math.sin(2 * phi)) ** n \
        / (math.pi ** m * base ** (n + m / 2))
    haf = hafnian_exact(np.real(circuit.sigma)[:n, :n])
    return _clamp_density(kappa * (haf ** 2).real, 'CVS origin density')


def embed_orthogonal(matrix, modes: int, nu: float) -> np.ndarray:
    """
    Builds a symmetric orthogonal ``m×m`` matrix Σ whose top-left
    ``2p×2p`` block is ``ν [[0, X], [Xᵀ, 0]]`` for a real ``p×p`` matrix X,
    so that ``Haf(Σ_{2p}) = ν^p Per(X)``.
    """
    x = np.asarray(matrix)
    if np.iscomplexobj(x):
        if np.max(np.abs(x.imag)) > get_tolerances().orthogonality:
            raise ParameterError('the embedded matrix must be real')
        x = x.real
    x = x.astype(float)
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise DimensionError('expected a square matrix', 'square', x.shape)
    p = x.shape[0]
    if modes < 4 * p:
        raise ParameterError('need m ≥ 4p modes', modes, p)
    if nu <= 0:
        raise ParameterError('ν must be positive', nu)
    y = nu * x
    gram = np.eye(p) - y.T @ y
    tol = get_tolerances().orthogonality
    evals, evecs = scipy.linalg.eigh(gram)
    if evals.min() < -tol:
        raise ParameterError('ν‖X‖ exceeds 1', nu * float(np.linalg.norm(x, 2)))
    try:
        z = scipy.linalg.cholesky(gram, lower=False)
    except np.linalg.LinAlgError:
        # singular: fall back to the symmetric square root
        z = np.diag(np.sqrt(np.clip(evals, 0, None))) @ evecs.T
    columns = np.vstack([y, z])
    complement = scipy.linalg.null_space(columns.T)
    c, d = complement[:p], complement[p:]
    b = z.T
    rest = modes - 4 * p
    zero = np.zeros((p, p))
    sigma = np.block([
        [zero, y, zero, c],
        [y.T, zero, b, zero],
        [zero, b.T, zero, d],
        [c.T, zero, d.T, zero],
    ])
    return scipy.linalg.block_diag(sigma, np.eye(rest)) if rest else sigma
