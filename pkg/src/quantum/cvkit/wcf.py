"""
Closed-form analysis of the linear-optics weak coin flipping protocol:
honest and cheating probabilities with losses, the fairness and balance
conditions, distance scans against the best classical protocol, and the
strong coin flipping construction built on an unbalanced instance.
"""

from __future__ import annotations

import enum
import logging
import math
from typing import (
    List,
    Optional,
    Sequence,
    Tuple,
)

import attr
from scipy.optimize import brentq

from .config import get_config, get_tolerances
from .exceptions import CVKitError, InfeasibleError, ParameterError
from .utils import parallel_map

__all__ = (
    'Detector',
    'WcfParams',
    'honest_probs',
    'best_integer_power',
    'cheat_probs',
    'solve_fair_y',
    'solve_balance',
    'solve_fair_balanced',
    'ScanRow',
    'advantage_scan',
    'strong_cf_solve',
)

log = logging.getLogger('quantum.cvkit.wcf')


class Detector(str, enum.Enum):
    THRESHOLD = 'threshold'
    NUMBER_RESOLVING = 'number_resolving'


def _unit_interval(instance, attribute, value) -> None:
    if not 0.0 <= value <= 1.0:
        raise ParameterError(f'{attribute.name} must lie in [0, 1]', value)


@attr.define(slots=True, frozen=True)
class WcfParams:
    """
    Beam-splitter reflectivities ``x, y, z`` and the efficiencies of the
    channel (``eta_t``), each party's fiber delay (``eta_f_a``, ``eta_f_b``)
    and detectors (``eta_d_a``, ``eta_d_b``).
    """

    x: float = attr.field(validator=_unit_interval)
    y: float = attr.field(validator=_unit_interval)
    z: float = attr.field(validator=_unit_interval)
    eta_t: float = attr.field(default=1.0, validator=_unit_interval)
    eta_f_a: float = attr.field(default=1.0, validator=_unit_interval)
    eta_f_b: float = attr.field(default=1.0, validator=_unit_interval)
    eta_d_a: float = attr.field(default=1.0, validator=_unit_interval)
    eta_d_b: float = attr.field(default=1.0, validator=_unit_interval)

    @classmethod
    def honest(cls, x: float, **efficiencies: float) -> WcfParams:
        """The lossless fair family ``y = 1 − 1/(2(1−x))``, ``z = 2x``."""
        if not 0.0 <= x <= 0.5:
            raise ParameterError('the fair family needs x in [0, 1/2]', x)
        return cls(x, 1.0 - 1.0 / (2.0 * (1.0 - x)), 2.0 * x, **efficiencies)

    def replace(self, **changes: float) -> WcfParams:
        return attr.evolve(self, **changes)


def honest_probs(p: WcfParams) -> Tuple[float, float, float]:
    """
    Winning probabilities of honest Alice and honest Bob, and the abort
    probability.
    """
    scale = p.eta_t * p.eta_d_b
    amp = math.sqrt(p.x * p.z * p.eta_f_a) + math.sqrt((1 - p.x) * p.y * (1 - p.z) * p.eta_f_b)
    p_a = scale * amp ** 2
    p_b = scale * (1 - p.x) * (1 - p.y)
    return p_a, p_b, 1.0 - p_a - p_b


def best_integer_power(r: float, s: float) -> Tuple[int, float]:
    """
    ``max_{l≥1} (r^l − s^l)`` for ``0 ≤ s ≤ r ≤ 1`` and its maximizer.
    The continuous optimum is ``ln(ln s / ln r) / ln(r/s)``.
    """
    if not 0.0 <= s <= r <= 1.0:
        raise ParameterError('need 0 ≤ s ≤ r ≤ 1', r, s)
    if s == 0.0 or r == s:
        return 1, r - s
    if r == 1.0:
        raise ParameterError('r and s must lie in (0, 1)', r, s)
    lam = math.log(math.log(s) / math.log(r)) / math.log(r / s)
    candidates = {max(1, math.floor(lam)), max(1, math.ceil(lam))}
    best = max(candidates, key=lambda l: (r ** l - s ** l, -l))  # noqa: E741
    return best, r ** best - s ** best


def cheat_probs(p: WcfParams, detector: Detector = Detector.THRESHOLD) -> Tuple[float, float, int]:
    """
    Optimal cheating probabilities of dishonest Alice and dishonest Bob.

    Against threshold detectors Alice sends ``l*`` photons; against
    number-resolving detectors extra photons are caught, so ``l* = 1``.

    :returns: ``(P_d_A, P_d_B, l_star)``
    """
    p_b = 1.0 - p.x * p.eta_f_a * p.eta_d_a
    r = 1.0 - p.eta_d_b * (1.0 - p.y * p.eta_f_b) * (1.0 - p.z)
    s = 1.0 - p.eta_d_b
    if Detector(detector) is Detector.NUMBER_RESOLVING:
        return r - s, p_b, 1
    l_star, p_a = best_integer_power(r, s)
    return p_a, p_b, l_star


def solve_fair_y(p: WcfParams) -> float:
    """
    The ``y`` equalizing the honest winning probabilities for the given
    ``x``, ``z`` and efficiencies (``p.y`` is ignored).
    """
    x, z, fa, fb = p.x, p.z, p.eta_f_a, p.eta_f_b
    if x >= 1.0:
        raise InfeasibleError('fairness needs x < 1', x)
    k = (1 - z) * fb + 1
    radicand = (1 - x) * k - x * z * fa
    if radicand < 0:
        z_max = (1 - x) * (1 + fb) / (x * fa + (1 - x) * fb)
        raise InfeasibleError('realness constraint violated', z, z_max)
    root = math.sqrt(radicand) - math.sqrt(x * z * (1 - z) * fa * fb)
    if root < 0:
        raise InfeasibleError('no nonnegative solution for y', x, z)
    y = root ** 2 / ((1 - x) * k ** 2)
    if y > 1.0:
        raise InfeasibleError('fair y exceeds 1', y)
    p_a, p_b, _ = honest_probs(p.replace(y=y))
    if abs(p_a - p_b) > get_tolerances().fairness:
        raise InfeasibleError('fairness check failed', p_a, p_b)
    return y


def solve_balance(p: WcfParams, detector: Detector = Detector.THRESHOLD) -> float:
    """
    The ``x`` equalizing both cheating probabilities for the given ``y``,
    ``z`` and efficiencies (``p.x`` is ignored).
    """
    scale = p.eta_f_a * p.eta_d_a
    if scale <= 0:
        raise InfeasibleError('Bob cannot be balanced without delay transmission', scale)
    p_a, _, _ = cheat_probs(p, detector)
    x = (1.0 - p_a) / scale
    if not 0.0 <= x <= 1.0:
        raise InfeasibleError('balanced x lies outside [0, 1]', x)
    return x


def solve_fair_balanced(
    p: WcfParams,
    detector: Detector = Detector.THRESHOLD,
    damping: float = 0.5,
    max_iter: int = 200,
    tol: float = None,
) -> WcfParams:
    """
    Alternates the fairness and balance solvers at fixed ``z`` and
    efficiencies, starting from ``x = 1 − 1/√2``.
    """
    tol = get_tolerances().alternation if tol is None else tol
    x = 1.0 - 1.0 / math.sqrt(2.0)
    for _ in range(max_iter):
        y = solve_fair_y(p.replace(x=x))
        target = solve_balance(p.replace(x=x, y=y), detector)
        log.debug('alternation x=%.12f y=%.12f target=%.12f', x, y, target)
        if abs(target - x) < tol:
            return p.replace(x=target, y=solve_fair_y(p.replace(x=target)))
        x += damping * (target - x)
    raise InfeasibleError('fairness and balance alternation did not converge', x)


@attr.define(slots=True, frozen=True)
class ScanRow:
    distance: float
    p_honest: float
    p_abort: float
    p_cheat_quantum: float
    p_cheat_classical: float
    advantage: bool
    p_star1: float = 1.0
    flagged: bool = False
    params: Optional[WcfParams] = None


def _scan_row(
    distance: float,
    z: float,
    eta_d: float,
    switch_loss: float,
    attenuation: float,
    detector: Detector,
) -> ScanRow:
    eta_t = 10 ** (-attenuation * distance / 10)
    eta_f = 10 ** (-switch_loss / 10) * eta_t ** 2
    base = WcfParams(
        0.0, 0.0, z, eta_t=eta_t, eta_f_a=eta_f, eta_f_b=eta_f, eta_d_a=eta_d, eta_d_b=eta_d,
    )
    try:
        solved = solve_fair_balanced(base, detector)
    except CVKitError as e:
        log.info('no fair balanced point at %.2f km: %s', distance, e)
        nan = float('nan')
        return ScanRow(distance, nan, nan, nan, nan, False, flagged=True)
    p_h, _, p_ab = honest_probs(solved)
    p_a, p_b, _ = cheat_probs(solved, detector)
    p_q = max(p_a, p_b)
    p_c = 1.0 - math.sqrt(max(p_ab, 0.0))
    return ScanRow(distance, p_h, p_ab, p_q, p_c, p_q < p_c, params=solved)


def advantage_scan(
    z: float,
    eta_d: float,
    switch_loss: float = None,
    distances: Sequence[float] = (0.0,),
    detector: Detector = Detector.THRESHOLD,
) -> List[ScanRow]:
    """
    Solves the fair balanced protocol at each distance (km) and compares
    its cheating probability with the classical bound ``1 − √P_ab``.
    Rows without a solution are flagged and never show an advantage.
    """
    if any(d < 0 for d in distances):
        raise ParameterError('distances must be nonnegative', list(distances))
    config = get_config()
    loss = config.switch_loss if switch_loss is None else switch_loss
    attenuation = config.fiber_attenuation
    return parallel_map(
        lambda d: _scan_row(float(d), z, eta_d, loss, attenuation, detector),
        list(distances),
    )


def strong_cf_solve() -> Tuple[float, float, float, float]:
    """
    The unbalanced protocol whose strong coin flipping extension has the
    smallest bias.

    :returns: ``(x, y, z, bias)``
    """
    def _x(y: float) -> float:
        return y ** 2 / ((1 - y) * (1 - 2 * y))

    def _z(y: float) -> float:
        return y / (1 - y) ** 2

    def _gap(y: float) -> float:
        z = _z(y)
        return 1 - _x(y) / 2 - 1 / (2 - y - z + y * z)

    y = brentq(_gap, 1e-6, 0.49, xtol=1e-14)
    x, z = _x(y), _z(y)
    p = 1 - (1 - x) * (1 - y)
    eps = 1 - (1 - y) * (1 - z) - p
    bias = max(0.5 - 0.5 * (p - eps), 1 / (2 - (p + eps)) - 0.5)
    return x, y, z, bias
