import datetime
import math
import sys
import time
from typing import (
    Callable,
    List,
    Mapping,
)

import attr
import click
import humanize
import numpy as np
from tqdm import tqdm

from ..fock import enumerate_sector
from ..heterodyne import sample_husimi_product
from ..mverify import bs_witness
from ..progmeas import (
    distinguishability_probs,
    hadamard_walsh,
    parity_postprocess,
    pi_statistic,
    sign_matrix,
)
from ..stellar import Rectangle, StellarSpec, count_zeros, robustness
from ..types import FockVector
from ..wcf import WcfParams, advantage_scan, cheat_probs, strong_cf_solve
from ..output.formatters import bool_output_formatter, float_output_formatter
from ..output.types import FieldSpec
from .main import fail, main, respond
from .pretty import print_fail, print_info
from .types import CLIContext


@attr.define(slots=True, frozen=True)
class Check:
    name: str
    measured: float
    expected: float
    tolerance: float
    passed: bool

    @classmethod
    def near(cls, name: str, measured: float, expected: float, tolerance: float) -> 'Check':
        return cls(name, measured, expected, tolerance, abs(measured - expected) <= tolerance)


Recipe = Callable[[int], List[Check]]


def _rfock_robustness(seed: int) -> List[Check]:
    result = robustness([0.0, 1.0], 1)
    return [Check.near('max_fidelity', result.max_fidelity, 3 * math.sqrt(3) / (4 * math.e), 1e-4)]


def _gkp_zeros(seed: int) -> List[Check]:
    unit = math.sqrt(math.pi)
    spec = StellarSpec.gkp()
    checks = []
    for shift in tqdm([0, 1, 1j], desc='gkp squares', leave=False):
        corner = (0.13 + 0.07j + shift) * unit
        zeros = count_zeros(spec, Rectangle(corner, 4 * unit, 4 * unit))
        checks.append(Check.near(f'zeros at {shift}', zeros, 16, 0))
    return checks


def _wcf_advantage(seed: int) -> List[Check]:
    checks = []
    product_gap = 0.0
    for x in np.linspace(0.0, 0.5, 50):
        p_a, p_b, _ = cheat_probs(WcfParams.honest(float(x)))
        product_gap = max(product_gap, abs(p_a * p_b - 0.5))
    checks.append(Check.near('lossless P_d_A·P_d_B − 1/2', product_gap, 0.0, 1e-12))
    p_a, p_b, _ = cheat_probs(WcfParams.honest(1 - 1 / math.sqrt(2)))
    checks.append(Check.near('lossless bias', max(p_a, p_b) - 0.5, math.sqrt(2) / 2 - 0.5, 1e-6))
    x, y, z, bias = strong_cf_solve()
    checks += [
        Check.near('strong x', x, 0.38, 0.01),
        Check.near('strong y', y, 0.31, 0.01),
        Check.near('strong z', z, 0.66, 0.01),
        Check.near('strong bias', bias, 0.31, 0.005),
    ]
    rows = advantage_scan(0.57, 0.95, distances=[float(d) for d in range(0, 101, 5)])
    checks.append(Check('advantage at 0 km', float(rows[0].advantage), 1.0, 0.0, rows[0].advantage))
    flip = next((r.distance for r in rows if not r.advantage), math.nan)
    checks.append(Check(
        'first distance without advantage', flip, math.nan, math.nan, not math.isnan(flip),
    ))
    return checks


def _hadamard_m4(seed: int) -> List[Check]:
    unitary = hadamard_walsh(2)
    signs = sign_matrix(2)
    total_i = total_d = 0.0
    mismatches = 0
    for d in enumerate_sector(4, 4):
        accepted = abs(pi_statistic(signs, d) - 4) < 1e-9
        if accepted != (parity_postprocess(signs, d) == 0):
            mismatches += 1
        if accepted:
            pr_i, pr_d = distinguishability_probs(unitary, d)
            total_i += pr_i
            total_d += pr_d
    return [
        Check.near('Σ Pr_i over accepted', total_i, 1.0, 1e-10),
        Check.near('Σ Pr_d over accepted', total_d, 0.25, 1e-10),
        Check.near('parity mismatches', mismatches, 0, 0),
    ]


def _bs_witness_m4(seed: int) -> List[Check]:
    one = FockVector(1, 1, {(1,): 1.0})
    vac = FockVector(1, 1, {(0,): 1.0})
    unitary = hadamard_walsh(2)
    epsilon, count, runs = 0.3, 100_000, 20
    ideal = corrupted = 0
    for run in tqdm(range(runs), desc='witness seeds', leave=False):
        good = sample_husimi_product([one, one, vac, vac], count, seed + run, unitary=unitary)
        bad = sample_husimi_product([one, vac, vac, vac], count, seed + runs + run, unitary=unitary)
        ideal += bs_witness(good, unitary, 2, epsilon).accepted
        corrupted += not bs_witness(bad, unitary, 2, epsilon).accepted
    return [
        Check('ideal accepted', ideal, 18, 0, ideal >= 18),
        Check('corrupted rejected', corrupted, 18, 0, corrupted >= 18),
    ]


recipes: Mapping[str, Recipe] = {
    'rfock-robustness': _rfock_robustness,
    'gkp-zeros': _gkp_zeros,
    'wcf-advantage': _wcf_advantage,
    'hadamard-m4': _hadamard_m4,
    'bs-witness-m4': _bs_witness_m4,
}


@main.command('reproduce')
@click.argument('recipe', type=click.Choice(list(recipes)))
@click.pass_obj
def reproduce(cli_ctx: CLIContext, recipe: str) -> None:
    """
    Runs a reference computation and reports pass/fail with the measured
    values.  Sampling recipes use --seed (0 if not given).
    """
    if cli_ctx.seed is None:
        cli_ctx.seed = 0
    started = time.perf_counter()
    try:
        checks = recipes[recipe](cli_ctx.seed)
    except Exception as e:
        fail(cli_ctx, e)
    elapsed = datetime.timedelta(seconds=time.perf_counter() - started)
    print_info(f'{recipe} finished in {humanize.precisedelta(elapsed, minimum_unit="milliseconds")}')
    respond(cli_ctx, 'reproduce', {'recipe': recipe}, [attr.asdict(c) for c in checks], [
        FieldSpec('name'),
        FieldSpec('measured', formatter=float_output_formatter),
        FieldSpec('expected', formatter=float_output_formatter),
        FieldSpec('tolerance', formatter=float_output_formatter),
        FieldSpec('passed', formatter=bool_output_formatter),
    ], table=True)
    failed = [c.name for c in checks if not c.passed]
    if failed:
        print_fail(f'{recipe}: failed checks: {", ".join(failed)}')
        sys.exit(1)
