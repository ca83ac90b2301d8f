from __future__ import annotations

import math
from typing import (
    Any,
    Dict,
    Iterator,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import attr
import numpy as np
from scipy.special import gammaln

__all__ = (
    'Occupation',
    'ComplexMatrix',
    'TruncatedOperator',
    'FockVector',
    'CoreState',
    'ConfidenceValue',
    'SampleBatch',
)

Occupation = Tuple[int, ...]
ComplexMatrix = np.ndarray
TruncatedOperator = np.ndarray


def _as_cutoff(value: Union[int, Sequence[int]]) -> Tuple[int, ...]:
    if isinstance(value, (int, np.integer)):
        return (int(value),)
    return tuple(int(v) for v in value)


def _as_amplitudes(value: Mapping[Sequence[int], complex]) -> Dict[Occupation, complex]:
    return {tuple(int(n) for n in k): complex(v) for k, v in value.items()}


@attr.define(slots=True, frozen=True)
class FockVector:
    """
    A (possibly unnormalized) multimode state in the photon-number basis.

    Attributes:
        modes: The number of modes.
        cutoff: The per-mode photon-number cutoff; a single integer is
            broadcast to all modes.
        amplitudes: Sparse mapping from occupation tuples to amplitudes.
        truncated_norm: The squared norm pushed beyond the cutoff by the
            operations that produced this vector.
    """

    modes: int = attr.field()
    cutoff: Tuple[int, ...] = attr.field(converter=_as_cutoff)
    amplitudes: Dict[Occupation, complex] = attr.field(converter=_as_amplitudes)
    truncated_norm: float = attr.field(default=0.0)

    @cutoff.validator
    def _check_cutoff(self, attribute, value) -> None:
        if len(value) == 1 and self.modes > 1:
            object.__setattr__(self, 'cutoff', value * self.modes)
        elif len(value) != self.modes:
            raise ValueError('cutoff must have one entry per mode', value)

    @amplitudes.validator
    def _check_amplitudes(self, attribute, value) -> None:
        cutoff = self.cutoff if len(self.cutoff) == self.modes else self.cutoff * self.modes
        for occ in value:
            if len(occ) != self.modes:
                raise ValueError('occupation length differs from the mode count', occ)
            if any(n < 0 or n > c for n, c in zip(occ, cutoff)):
                raise ValueError('occupation exceeds the cutoff', occ)

    @property
    def truncated(self) -> bool:
        return self.truncated_norm > 0.0

    def support(self) -> Iterator[Occupation]:
        return iter(sorted(self.amplitudes, reverse=True))

    def amplitude(self, occupation: Sequence[int]) -> complex:
        return self.amplitudes.get(tuple(occupation), 0j)

    def norm(self) -> float:
        return math.sqrt(sum(abs(v) ** 2 for v in self.amplitudes.values()))

    def normalized(self) -> FockVector:
        norm = self.norm()
        if norm == 0.0:
            raise ValueError('Cannot normalize a zero vector')
        return attr.evolve(
            self,
            amplitudes={k: v / norm for k, v in self.amplitudes.items()},
        )

    def inner(self, other: FockVector) -> complex:
        """⟨self|other⟩"""
        if other.modes != self.modes:
            raise ValueError('mode counts differ', self.modes, other.modes)
        return sum(
            (v.conjugate() * other.amplitudes[k]
             for k, v in self.amplitudes.items() if k in other.amplitudes),
            0j,
        )

    def photon_numbers(self) -> Tuple[int, ...]:
        return tuple(sorted({sum(k) for k in self.amplitudes}))


@attr.define(slots=True, frozen=True, eq=False)
class CoreState:
    """
    A single-mode state with finite Fock support, stored as its Fock
    coefficients ``c_n``.  Its stellar function is ``Σ c_n zⁿ / √n!``.
    """

    coefficients: np.ndarray = attr.field(
        converter=lambda v: np.trim_zeros(np.asarray(v, dtype=complex), 'b'),
    )

    @coefficients.validator
    def _check(self, attribute, value) -> None:
        if value.ndim != 1 or value.size == 0:
            raise ValueError('a core state needs at least one nonzero coefficient')

    @property
    def degree(self) -> int:
        return self.coefficients.size - 1

    def norm(self) -> float:
        return float(np.linalg.norm(self.coefficients))

    def normalized(self) -> CoreState:
        return CoreState(self.coefficients / self.norm())

    def polynomial(self) -> np.ndarray:
        """The monomial coefficients of the stellar function."""
        n = np.arange(self.coefficients.size)
        return self.coefficients * np.exp(-0.5 * gammaln(n + 1))

    @classmethod
    def from_polynomial(cls, poly: Sequence[complex]) -> CoreState:
        poly = np.asarray(poly, dtype=complex)
        n = np.arange(poly.size)
        return cls(poly * np.exp(0.5 * gammaln(n + 1)))


@attr.define(slots=True, frozen=True)
class ConfidenceValue:
    """
    An estimate with an additive error bound holding except with the given
    failure probability.
    """

    value: Union[float, complex] = attr.field()
    bound: float = attr.field()
    failure: float = attr.field()
    clamped: bool = attr.field(default=False)

    @property
    def lower(self) -> float:
        return float(np.real(self.value)) - self.bound

    @property
    def upper(self) -> float:
        return float(np.real(self.value)) + self.bound

    def contains(self, target: Union[float, complex]) -> bool:
        return abs(self.value - target) <= self.bound


@attr.define(slots=True, frozen=True, eq=False)
class SampleBatch:
    """
    Heterodyne (or photon-counting) samples, one row per repetition.
    """

    samples: np.ndarray = attr.field(converter=np.asarray)
    seed: Optional[int] = attr.field(default=None)
    metadata: Mapping[str, Any] = attr.field(factory=dict)

    @property
    def count(self) -> int:
        return int(self.samples.shape[0])

    @property
    def modes(self) -> int:
        return 1 if self.samples.ndim == 1 else int(self.samples.shape[1])

    def as_matrix(self) -> np.ndarray:
        """Samples as an ``(N, m)`` complex array."""
        if self.samples.ndim == 1:
            return self.samples.reshape(-1, 1)
        return self.samples
