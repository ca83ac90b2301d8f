import enum
import logging
import os
from typing import (
    Any,
    Callable,
    Mapping,
    Optional,
    TypeVar,
    Union,
    cast,
)

import attr

__all__ = [
    'get_env',
    'bool_env',
    'get_config',
    'set_config',
    'get_tolerances',
    'Tolerances',
    'CVKitConfig',
    'ENV_PREFIX',
]


class Undefined(enum.Enum):
    token = object()


_config = None
_undefined = Undefined.token

ENV_PREFIX = 'CVKIT_'

T = TypeVar('T')


def default_clean(v: Union[str, Mapping]) -> T:
    return cast(T, v)


def get_env(
    key: str,
    default: Union[str, Mapping, Undefined] = _undefined,
    *,
    clean: Callable[[Any], T] = default_clean,
) -> T:
    """
    Retrieves a configuration value from the environment variables.
    The given *key* is uppercased and prefixed by ``"CVKIT_"``.

    :param key: The key name.
    :param default: The default value returned when there is no corresponding
        environment variable.
    :param clean: A single-argument function that is applied to the result of lookup
        (in both successes and the default value for failures).
        The default is returning the value as-is.

    :returns: The value processed by the *clean* function.
    """
    key = key.upper()
    raw = os.environ.get(ENV_PREFIX + key)
    if raw is None:
        if default is _undefined:
            raise KeyError(key)
        result = default
    else:
        result = raw
    return clean(result)


def bool_env(v: str) -> bool:
    v = v.lower()
    if v in ('y', 'yes', 't', 'true', '1'):
        return True
    if v in ('n', 'no', 'f', 'false', '0'):
        return False
    raise ValueError('Unrecognized value of boolean environment variable', v)


def _clean_positive_int(v: Union[str, int]) -> int:
    value = int(v)
    if value < 1:
        raise ValueError('Expected a positive integer', v)
    return value


def _clean_log_level(v: Union[str, int]) -> int:
    if isinstance(v, int):
        return v
    if v.isdigit():
        return int(v)
    level = logging.getLevelName(v.upper())
    if not isinstance(level, int):
        raise ValueError('Unknown logging level', v)
    return level


@attr.define(slots=True, frozen=True)
class Tolerances:
    """
    The numerical tolerances shared by every module.

    Attributes:
        unitarity: Max entry of ``|U U† - I|`` accepted as unitary.
        normalization: Max deviation of a squared norm from 1.
        symmetry: Max entry of ``|A - Aᵀ|`` accepted as symmetric.
        orthogonality: Max entry of ``|O Oᵀ - I|`` accepted as orthogonal.
        condition: Largest condition number accepted for linear solves.
        clamp: Largest negative excursion of a density clamped silently.
        residue: Max distance of a winding integral from an integer.
        contour: Relative envelope below which a contour touches a zero.
        optimizer: Nelder-Mead convergence tolerance.
        alternation: Convergence tolerance of damped fixed-point iterations.
        fairness: Accepted mismatch of the two honest winning probabilities.
    """

    unitarity: float = 1e-9
    normalization: float = 1e-6
    symmetry: float = 1e-9
    orthogonality: float = 1e-9
    condition: float = 1e12
    clamp: float = 1e-9
    residue: float = 0.1
    contour: float = 1e-6
    optimizer: float = 1e-10
    alternation: float = 1e-10
    fairness: float = 1e-10

    @classmethod
    def names(cls):
        return tuple(a.name for a in attr.fields(cls))

    @classmethod
    def from_env(cls) -> 'Tolerances':
        values = {
            name: get_env(f'TOL_{name}', str(getattr(cls(), name)), clean=float)
            for name in cls.names()
        }
        return cls(**values)

    def replace(self, **overrides: Optional[float]) -> 'Tolerances':
        unknown = set(overrides) - set(self.names())
        if unknown:
            raise ValueError('Unknown tolerance names', sorted(unknown))
        return attr.evolve(self, **{k: float(v) for k, v in overrides.items() if v is not None})


class CVKitConfig:
    """
    Represents the process-wide configuration of the toolkit.
    Every value may be given explicitly or through ``CVKIT_*`` environment
    variables.

    :param threads: The maximum number of worker threads used for independent
        jobs such as optimizer restarts and scan rows.
    :param restarts: The number of quasi-random restarts of the robustness optimizer.
    :param max_sector: The largest number of occupation tuples enumerated in one sector.
    :param lift_limit: The largest dimension of a lifted interferometer matrix.
    :param quad_min_points: The initial number of quadrature nodes per contour side.
    :param quad_max_points: The upper limit of quadrature nodes per contour side.
    :param contour_retries: How many times a contour touching a zero is enlarged.
    :param min_acceptance: The smallest rejection-sampler acceptance rate tolerated.
    :param gkp_truncation: The lattice truncation of the GKP stellar function.
    :param fiber_attenuation: The fiber loss in dB/km used by distance scans.
    :param switch_time: The optical switch delay in nanoseconds.
    :param fiber_light_speed: The speed of light inside fibers in km/s.
    :param log_level: The logging level configured by the command-line front end.
    :param tolerances: The tolerance record; built from the environment if omitted.
    """

    DEFAULTS: Mapping[str, str] = {
        'threads': '1',
        'restarts': '16',
        'max_sector': '100000',
        'lift_limit': '3000',
        'quad_min_points': '256',
        'quad_max_points': str(2 ** 15),
        'contour_retries': '3',
        'min_acceptance': '1e-4',
        'gkp_truncation': '5',
        'fiber_attenuation': '0.2',
        'switch_time': '500',
        'fiber_light_speed': '2e5',
        'log_level': 'WARNING',
    }
    """
    The default values for config parameters settable via environment variables.
    """

    def __init__(
        self, *,
        threads: int = None,
        restarts: int = None,
        max_sector: int = None,
        lift_limit: int = None,
        quad_min_points: int = None,
        quad_max_points: int = None,
        contour_retries: int = None,
        min_acceptance: float = None,
        gkp_truncation: int = None,
        fiber_attenuation: float = None,
        switch_time: float = None,
        fiber_light_speed: float = None,
        log_level: Union[int, str] = None,
        tolerances: Tolerances = None,
    ) -> None:
        self._threads = threads if threads is not None else \
            get_env('THREADS', self.DEFAULTS['threads'], clean=_clean_positive_int)
        self._restarts = restarts if restarts is not None else \
            get_env('RESTARTS', self.DEFAULTS['restarts'], clean=_clean_positive_int)
        self._max_sector = max_sector if max_sector is not None else \
            get_env('MAX_SECTOR', self.DEFAULTS['max_sector'], clean=_clean_positive_int)
        self._lift_limit = lift_limit if lift_limit is not None else \
            get_env('LIFT_LIMIT', self.DEFAULTS['lift_limit'], clean=_clean_positive_int)
        self._quad_min_points = quad_min_points if quad_min_points is not None else \
            get_env('QUAD_MIN_POINTS', self.DEFAULTS['quad_min_points'], clean=_clean_positive_int)
        self._quad_max_points = quad_max_points if quad_max_points is not None else \
            get_env('QUAD_MAX_POINTS', self.DEFAULTS['quad_max_points'], clean=_clean_positive_int)
        self._contour_retries = contour_retries if contour_retries is not None else \
            get_env('CONTOUR_RETRIES', self.DEFAULTS['contour_retries'], clean=int)
        self._min_acceptance = min_acceptance if min_acceptance is not None else \
            get_env('MIN_ACCEPTANCE', self.DEFAULTS['min_acceptance'], clean=float)
        self._gkp_truncation = gkp_truncation if gkp_truncation is not None else \
            get_env('GKP_TRUNCATION', self.DEFAULTS['gkp_truncation'], clean=_clean_positive_int)
        self._fiber_attenuation = fiber_attenuation if fiber_attenuation is not None else \
            get_env('FIBER_ATTENUATION', self.DEFAULTS['fiber_attenuation'], clean=float)
        self._switch_time = switch_time if switch_time is not None else \
            get_env('SWITCH_TIME', self.DEFAULTS['switch_time'], clean=float)
        self._fiber_light_speed = fiber_light_speed if fiber_light_speed is not None else \
            get_env('FIBER_LIGHT_SPEED', self.DEFAULTS['fiber_light_speed'], clean=float)
        self._log_level = _clean_log_level(log_level) if log_level is not None else \
            get_env('LOG_LEVEL', self.DEFAULTS['log_level'], clean=_clean_log_level)
        self._tolerances = tolerances if tolerances is not None else Tolerances.from_env()

    @property
    def threads(self) -> int:
        """The maximum number of worker threads."""
        return self._threads

    @property
    def restarts(self) -> int:
        """The number of optimizer restarts."""
        return self._restarts

    @property
    def max_sector(self) -> int:
        """The largest enumerable photon-number sector."""
        return self._max_sector

    @property
    def lift_limit(self) -> int:
        """The largest lifted interferometer dimension."""
        return self._lift_limit

    @property
    def quad_min_points(self) -> int:
        return self._quad_min_points

    @property
    def quad_max_points(self) -> int:
        return self._quad_max_points

    @property
    def contour_retries(self) -> int:
        return self._contour_retries

    @property
    def min_acceptance(self) -> float:
        """The smallest tolerated rejection-sampler acceptance rate."""
        return self._min_acceptance

    @property
    def gkp_truncation(self) -> int:
        return self._gkp_truncation

    @property
    def fiber_attenuation(self) -> float:
        """The fiber attenuation in dB/km."""
        return self._fiber_attenuation

    @property
    def switch_time(self) -> float:
        """The optical switch delay in nanoseconds."""
        return self._switch_time

    @property
    def fiber_light_speed(self) -> float:
        return self._fiber_light_speed

    @property
    def switch_loss(self) -> float:
        """
        The loss in dB of the fiber delay line that holds a pulse while
        the optical switch operates.
        """
        length = self._fiber_light_speed * self._switch_time * 1e-9
        return self._fiber_attenuation * length

    @property
    def log_level(self) -> int:
        return self._log_level

    @property
    def tolerances(self) -> Tolerances:
        """The shared tolerance record."""
        return self._tolerances


def get_config():
    """
    Returns the configuration for the current process.
    If there is no explicitly set :class:`CVKitConfig` instance,
    it will generate a new one from the current environment variables
    and defaults.
    """
    global _config
    if _config is None:
        _config = CVKitConfig()
    return _config


def set_config(conf: Optional[CVKitConfig]) -> None:
    """
    Sets the configuration used throughout the current process.
    """
    global _config
    _config = conf


def get_tolerances() -> Tolerances:
    return get_config().tolerances
