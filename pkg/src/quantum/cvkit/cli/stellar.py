from typing import (
    List,
    Optional,
)

import click

from ..exceptions import ParameterError
from ..stellar import (
    Circle,
    Rectangle,
    RobustnessResult,
    StellarSpec,
    cat_robustness_profile,
    count_zeros,
    extract_core,
    robustness_profile,
    stellar_eval,
)
from ..output.formatters import bool_output_formatter, complex_output_formatter, float_output_formatter
from ..output.types import FieldSpec
from .main import fail, main, respond
from .params import complex_param, float_list, vector_param
from .types import CLIContext

_profile_fields = [
    FieldSpec('rank', humanized_name='k'),
    FieldSpec('value', humanized_name='R_k', alt_name='robustness', formatter=float_output_formatter),
    FieldSpec('max_fidelity', formatter=float_output_formatter),
    FieldSpec('xi', formatter=complex_output_formatter),
    FieldSpec('alpha', formatter=complex_output_formatter),
    FieldSpec('converged', formatter=bool_output_formatter),
]


def _profile_rows(results: List[RobustnessResult]):
    return [
        {
            'rank': r.rank,
            'value': r.value,
            'max_fidelity': r.max_fidelity,
            'xi': r.xi,
            'alpha': r.alpha,
            'converged': r.converged,
        }
        for r in results
    ]


def _spec(core, xi, alpha, cat: Optional[int], gkp: bool, truncation: Optional[int]) -> StellarSpec:
    chosen = sum([core is not None, cat is not None, gkp])
    if chosen != 1:
        raise ParameterError('give exactly one of --core, --cat and --gkp')
    if gkp:
        return StellarSpec.gkp(truncation)
    if cat is not None:
        return StellarSpec.cat(alpha, cat)
    if xi != 0 or alpha != 0:
        return StellarSpec.gaussian_core(core, xi, alpha)
    return StellarSpec.core(core)


@main.command('stellar-eval')
@click.option('-c', '--core', type=vector_param, default=None,
              help='Core state coefficients c_0 … c_n.')
@click.option('--xi', type=complex_param, default='0', help='Squeezing of a Gaussian-core state.')
@click.option('--alpha', type=complex_param, default='0', help='Displacement (or cat amplitude).')
@click.option('--cat', type=click.Choice(['1', '-1']), default=None, help='Cat parity.')
@click.option('--gkp', is_flag=True, help='Use the GKP stellar function.')
@click.option('--truncation', type=click.IntRange(min=3), default=None,
              help='Lattice truncation of the GKP sum.')
@click.option('-z', '--point', 'points', type=complex_param, multiple=True, required=True,
              help='Evaluation point; may be repeated.')
@click.pass_obj
def stellar_eval_cmd(cli_ctx: CLIContext, core, xi, alpha, cat, gkp, truncation, points) -> None:
    """
    Evaluates a stellar function at the given points.
    """
    inputs = {'core': core, 'xi': xi, 'alpha': alpha, 'cat': cat, 'gkp': gkp,
              'truncation': truncation, 'points': list(points)}
    try:
        spec = _spec(core, xi, alpha, None if cat is None else int(cat), gkp, truncation)
        values = stellar_eval(spec, list(points))
    except Exception as e:
        fail(cli_ctx, e)
    rows = [{'z': z, 'value': complex(v)} for z, v in zip(points, values)]
    respond(cli_ctx, 'stellar-eval', inputs, rows, [
        FieldSpec('z', formatter=complex_output_formatter),
        FieldSpec('value', humanized_name='F(z)', formatter=complex_output_formatter),
    ], table=True)


@main.command('stellar-zeros')
@click.option('-c', '--core', type=vector_param, default=None,
              help='Core state coefficients c_0 … c_n.')
@click.option('--xi', type=complex_param, default='0', help='Squeezing of a Gaussian-core state.')
@click.option('--alpha', type=complex_param, default='0', help='Displacement (or cat amplitude).')
@click.option('--cat', type=click.Choice(['1', '-1']), default=None, help='Cat parity.')
@click.option('--gkp', is_flag=True, help='Use the GKP stellar function.')
@click.option('--truncation', type=click.IntRange(min=3), default=None,
              help='Lattice truncation of the GKP sum.')
@click.option('--rect', type=float_list, default=None,
              help='Rectangle contour: corner_re,corner_im,width,height.')
@click.option('--circle', type=float_list, default=None,
              help='Circle contour: center_re,center_im,radius.')
@click.option('--points', type=click.IntRange(min=8), default=None,
              help='Quadrature points per side.')
@click.pass_obj
def stellar_zeros(
    cli_ctx: CLIContext, core, xi, alpha, cat, gkp, truncation, rect, circle, points,
) -> None:
    """
    Counts the zeros of a stellar function inside a contour.
    """
    inputs = {'core': core, 'xi': xi, 'alpha': alpha, 'cat': cat, 'gkp': gkp,
              'truncation': truncation, 'rect': rect, 'circle': circle, 'points': points}
    try:
        spec = _spec(core, xi, alpha, None if cat is None else int(cat), gkp, truncation)
        if (rect is None) == (circle is None):
            raise ParameterError('give exactly one of --rect and --circle')
        if rect is not None:
            if len(rect) != 4:
                raise ParameterError('--rect takes four numbers', rect)
            contour = Rectangle(complex(rect[0], rect[1]), rect[2], rect[3])
        else:
            if len(circle) != 3:
                raise ParameterError('--circle takes three numbers', circle)
            contour = Circle(complex(circle[0], circle[1]), circle[2])
        result = count_zeros(spec, contour, points)
    except Exception as e:
        fail(cli_ctx, e)
    respond(cli_ctx, 'stellar-zeros', inputs, {'zeros': result})


@main.command('robustness')
@click.option('-c', '--core', type=vector_param, required=True,
              help='Core state coefficients c_0 … c_n.')
@click.option('-k', '--kmax', type=click.IntRange(min=1), default=None,
              help='Largest rank; defaults to the core degree.')
@click.option('--restarts', type=click.IntRange(min=1), default=None)
@click.pass_obj
def robustness_cmd(cli_ctx: CLIContext, core, kmax, restarts) -> None:
    """
    Robustness profile R_1 … R_kmax of a core state.
    """
    inputs = {'core': core, 'kmax': kmax, 'restarts': restarts}
    try:
        if kmax is None:
            kmax = max(1, len(core) - 1)
        results = robustness_profile(core, kmax, restarts)
    except Exception as e:
        fail(cli_ctx, e)
    respond(cli_ctx, 'robustness', inputs, _profile_rows(results), _profile_fields, table=True)


@main.command('cat-robustness')
@click.option('--alpha', type=complex_param, required=True)
@click.option('--sign', type=click.Choice(['1', '-1']), default='1', show_default=True)
@click.option('-k', '--kmax', type=click.IntRange(min=1), default=3, show_default=True)
@click.option('--restarts', type=click.IntRange(min=1), default=None)
@click.pass_obj
def cat_robustness_cmd(cli_ctx: CLIContext, alpha, sign, kmax, restarts) -> None:
    """
    Robustness profile of the cat state |α⟩ ± |−α⟩.
    """
    inputs = {'alpha': alpha, 'sign': sign, 'kmax': kmax, 'restarts': restarts}
    try:
        results = cat_robustness_profile(alpha, int(sign), kmax, restarts)
    except Exception as e:
        fail(cli_ctx, e)
    respond(cli_ctx, 'cat-robustness', inputs, _profile_rows(results), _profile_fields, table=True)


@main.command('core-extract')
@click.option('-P', '--polynomial', type=vector_param, required=True,
              help='Monomial coefficients of the polynomial factor.')
@click.option('--xi', type=complex_param, default='0')
@click.option('--alpha', type=complex_param, default='0')
@click.pass_obj
def core_extract_cmd(cli_ctx: CLIContext, polynomial, xi, alpha) -> None:
    """
    Recovers the core state of a Gaussian-core stellar function.
    """
    inputs = {'polynomial': polynomial, 'xi': xi, 'alpha': alpha}
    try:
        core = extract_core(polynomial, xi, alpha)
    except Exception as e:
        fail(cli_ctx, e)
    respond(cli_ctx, 'core-extract', inputs, core)
