import math
from typing import Any, Dict

import click

from ..wcf import (
    Detector,
    ScanRow,
    WcfParams,
    advantage_scan,
    cheat_probs,
    honest_probs,
    solve_fair_balanced,
    strong_cf_solve,
)
from ..output.formatters import bool_output_formatter, count_output_formatter, float_output_formatter
from ..output.types import FieldSpec
from .main import fail, main, respond
from .params import range_param
from .types import CLIContext

_detector_option = click.option(
    '--detector', type=click.Choice([d.value for d in Detector]),
    default=Detector.THRESHOLD.value, show_default=True,
    help='Detectors of the honest parties.',
)


_scan_fields = [
    *(FieldSpec(name, formatter=float_output_formatter) for name in
      ('distance', 'p_honest', 'p_abort', 'p_cheat_quantum', 'p_cheat_classical')),
    FieldSpec('advantage', formatter=bool_output_formatter),
    FieldSpec('flagged', formatter=bool_output_formatter),
]


def _row_dict(r: ScanRow) -> Dict[str, Any]:
    return {
        'distance': r.distance,
        'p_honest': r.p_honest,
        'p_abort': r.p_abort,
        'p_cheat_quantum': r.p_cheat_quantum,
        'p_cheat_classical': r.p_cheat_classical,
        'advantage': r.advantage,
        'flagged': r.flagged,
    }


@main.command('wcf-probs')
@click.option('-x', type=float, default=None, help='First beam-splitter reflectivity.')
@click.option('-y', type=float, default=None, help='Second beam-splitter reflectivity.')
@click.option('-z', type=float, required=True, help='Third beam-splitter reflectivity.')
@click.option('--eta-t', type=float, default=1.0, show_default=True)
@click.option('--eta-f-a', type=float, default=1.0, show_default=True)
@click.option('--eta-f-b', type=float, default=1.0, show_default=True)
@click.option('--eta-d-a', type=float, default=1.0, show_default=True)
@click.option('--eta-d-b', type=float, default=1.0, show_default=True)
@_detector_option
@click.option('--solve', is_flag=True,
              help='Solve x and y for a fair and balanced protocol at the given z.')
@click.pass_obj
def wcf_probs(
    cli_ctx: CLIContext, x, y, z, eta_t, eta_f_a, eta_f_b, eta_d_a, eta_d_b, detector, solve,
) -> None:
    """
    Honest and cheating probabilities of the weak coin flipping protocol.
    """
    inputs = {'x': x, 'y': y, 'z': z, 'eta_t': eta_t, 'eta_f_a': eta_f_a, 'eta_f_b': eta_f_b,
              'eta_d_a': eta_d_a, 'eta_d_b': eta_d_b, 'detector': detector, 'solve': solve}
    try:
        detector = Detector(detector)
        efficiencies = dict(
            eta_t=eta_t, eta_f_a=eta_f_a, eta_f_b=eta_f_b, eta_d_a=eta_d_a, eta_d_b=eta_d_b,
        )
        if solve:
            params = solve_fair_balanced(WcfParams(0.0, 0.0, z, **efficiencies), detector)
        else:
            if x is None or y is None:
                raise click.UsageError('-x and -y are required unless --solve is given')
            params = WcfParams(x, y, z, **efficiencies)
        p_a, p_b, p_abort = honest_probs(params)
        p_cheat_a, p_cheat_b, l_star = cheat_probs(params, detector)
    except click.UsageError:
        raise
    except Exception as e:
        fail(cli_ctx, e)
    p_cheat = max(p_cheat_a, p_cheat_b)
    p_classical = 1.0 - math.sqrt(max(p_abort, 0.0))
    result = {
        'x': params.x,
        'y': params.y,
        'z': params.z,
        'p_honest_a': p_a,
        'p_honest_b': p_b,
        'p_abort': p_abort,
        'p_cheat_a': p_cheat_a,
        'p_cheat_b': p_cheat_b,
        'l_star': l_star,
        'p_cheat_classical': p_classical,
        'advantage': p_cheat < p_classical,
    }
    fields = [FieldSpec(name, formatter=float_output_formatter) for name in list(result)[:-3]]
    fields += [
        FieldSpec('l_star', formatter=count_output_formatter),
        FieldSpec('p_cheat_classical', formatter=float_output_formatter),
        FieldSpec('advantage', formatter=bool_output_formatter),
    ]
    respond(cli_ctx, 'wcf-probs', inputs, result, fields)


@main.command('wcf-point')
@click.option('-z', type=float, required=True, help='Third beam-splitter reflectivity.')
@click.option('--eta-d', type=float, required=True, help='Detector efficiency of both parties.')
@click.option('--switch-loss', type=float, default=None,
              help='Loss of the delay line in dB; derived from the configuration if omitted.')
@click.option('-d', '--distance', type=click.FloatRange(min=0), default=0.0, show_default=True,
              help='Distance in km.')
@_detector_option
@click.pass_obj
def wcf_point(cli_ctx: CLIContext, z, eta_d, switch_loss, distance, detector) -> None:
    """
    The fair balanced protocol and its quantum advantage at one distance.
    """
    inputs = {'z': z, 'eta_d': eta_d, 'switch_loss': switch_loss,
              'distance': distance, 'detector': detector}
    try:
        row, = advantage_scan(z, eta_d, switch_loss, [distance], Detector(detector))
    except Exception as e:
        fail(cli_ctx, e)
    result = _row_dict(row)
    if row.params is not None:
        result.update(x=row.params.x, y=row.params.y)
    respond(cli_ctx, 'wcf-point', inputs, result, [*_scan_fields, *(
        FieldSpec(name, formatter=float_output_formatter) for name in ('x', 'y') if name in result
    )])


@main.command('wcf-scan')
@click.option('-z', type=float, required=True, help='Third beam-splitter reflectivity.')
@click.option('--eta-d', type=float, required=True, help='Detector efficiency of both parties.')
@click.option('--switch-loss', type=float, default=None,
              help='Loss of the delay line in dB; derived from the configuration if omitted.')
@click.option('--distances', type=range_param, default='0:50:10', show_default=True,
              help='Distances in km as start:stop:step or a comma-separated list.')
@_detector_option
@click.pass_obj
def wcf_scan(cli_ctx: CLIContext, z, eta_d, switch_loss, distances, detector) -> None:
    """
    Quantum advantage of the fair balanced protocol over distance.
    """
    inputs = {'z': z, 'eta_d': eta_d, 'switch_loss': switch_loss,
              'distances': distances, 'detector': detector}
    try:
        rows = advantage_scan(z, eta_d, switch_loss, distances, Detector(detector))
    except Exception as e:
        fail(cli_ctx, e)
    respond(cli_ctx, 'wcf-scan', inputs, [_row_dict(r) for r in rows], _scan_fields, table=True)


@main.command('scf-solve')
@click.pass_obj
def scf_solve(cli_ctx: CLIContext) -> None:
    """
    The unbalanced weak protocol with the least strong coin flipping bias.
    """
    try:
        x, y, z, bias = strong_cf_solve()
    except Exception as e:
        fail(cli_ctx, e)
    result = {'x': x, 'y': y, 'z': z, 'bias': bias}
    respond(cli_ctx, 'scf-solve', {}, result,
            [FieldSpec(name, formatter=float_output_formatter) for name in result])
