from typing import Any, Tuple

__all__ = (
    'CVKitError',
    'DimensionError',
    'NotUnitaryError',
    'NotNormalizedError',
    'NonSymmetricError',
    'SizeLimitError',
    'IllConditionedError',
    'ParameterError',
    'ContourError',
    'InfeasibleError',
    'SamplerError',
    'NegativeDensityError',
    'CVKitWarning',
    'TruncationWarning',
    'ClampWarning',
    'ConvergenceWarning',
)


class CVKitError(Exception):
    '''Exception type to catch all quantum.cvkit errors.'''

    def __str__(self):
        return repr(self)


class DimensionError(CVKitError):
    """
    Raised when the shapes, mode counts or photon numbers of the operands
    do not agree.
    """

    def __init__(self, message: str, expected: Any = None, actual: Any = None):
        super().__init__(message, expected, actual)

    @property
    def message(self) -> str:
        return self.args[0]

    @property
    def expected(self) -> Any:
        return self.args[1]

    @property
    def actual(self) -> Any:
        return self.args[2]


class NotUnitaryError(CVKitError):
    '''The given matrix deviates from unitarity by more than the tolerance.'''

    def __init__(self, deviation: float, tolerance: float):
        super().__init__(deviation, tolerance)

    @property
    def deviation(self) -> float:
        return self.args[0]

    @property
    def tolerance(self) -> float:
        return self.args[1]


class NotNormalizedError(CVKitError):

    def __init__(self, norm: float, tolerance: float):
        super().__init__(norm, tolerance)

    @property
    def norm(self) -> float:
        return self.args[0]

    @property
    def tolerance(self) -> float:
        return self.args[1]


class NonSymmetricError(CVKitError):
    '''The matrix handed to a hafnian kernel is not symmetric.'''

    def __init__(self, deviation: float, tolerance: float):
        super().__init__(deviation, tolerance)

    @property
    def deviation(self) -> float:
        return self.args[0]


class SizeLimitError(CVKitError):
    """
    Raised when an exact computation would exceed the configured size
    limits (sector sizes, lifted dimensions or kernel orders).
    """

    def __init__(self, what: str, size: int, limit: int):
        super().__init__(what, size, limit)

    @property
    def what(self) -> str:
        return self.args[0]

    @property
    def size(self) -> int:
        return self.args[1]

    @property
    def limit(self) -> int:
        return self.args[2]


class IllConditionedError(CVKitError):

    def __init__(self, condition: float, limit: float):
        super().__init__(condition, limit)

    @property
    def condition(self) -> float:
        return self.args[0]


class ParameterError(CVKitError):
    """
    Exceptions from argument validation, such as out-of-range efficiencies,
    invalid group orders or malformed profiles.
    """

    pass


class ContourError(CVKitError):
    """
    The argument-principle integral could not be resolved: the contour
    keeps touching a zero or the winding number is not an integer.
    """

    def __init__(self, reason: str, value: complex = complex('nan')):
        super().__init__(reason, value)

    @property
    def reason(self) -> str:
        return self.args[0]

    @property
    def value(self) -> complex:
        return self.args[1]


class InfeasibleError(CVKitError):
    '''The requested protocol parameters do not admit a physical solution.'''

    pass


class SamplerError(CVKitError):

    def __init__(self, acceptance: float, minimum: float):
        super().__init__(acceptance, minimum)

    @property
    def acceptance(self) -> float:
        return self.args[0]


class NegativeDensityError(CVKitError):
    """
    A probability density evaluated below zero by more than the clamp
    tolerance.
    """

    def __init__(self, what: str, value: float, tolerance: float):
        super().__init__(what, value, tolerance)

    @property
    def value(self) -> float:
        return self.args[1]


class CVKitWarning(UserWarning):
    pass


class TruncationWarning(CVKitWarning):
    """
    The operation moved probability mass beyond the Fock cutoff and
    the result is no longer normalized.
    """

    pass


class ClampWarning(CVKitWarning):
    '''A density or fidelity estimate left its physical range and was clamped.'''

    pass


class ConvergenceWarning(CVKitWarning):
    """
    An optimizer or fixed-point iteration stopped before meeting its
    tolerance.
    """

    pass


def describe(exc: BaseException) -> Tuple[str, str]:
    return type(exc).__name__, ', '.join(map(repr, exc.args))
