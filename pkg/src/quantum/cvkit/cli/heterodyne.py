import json
import pathlib

import click
import numpy as np

from ..codec import decode_fock, decode_gaussian, decode_vector, load_samples, to_jsonable
from ..exceptions import ParameterError
from ..heterodyne import (
    VerificationBudget,
    certify_fidelity,
    parameter_family,
    rank_witness,
    sample_husimi,
    sample_husimi_product,
    tomo_estimate,
    tomo_sample_count,
    verification_bounds,
    wigner_point,
)
from ..output.formatters import (
    bool_output_formatter,
    complex_output_formatter,
    count_output_formatter,
    float_output_formatter,
)
from ..output.types import FieldSpec
from ..types import ConfidenceValue, FockVector
from .main import fail, main, respond
from .params import complex_param, float_list, json_param, matrix_param, vector_param
from .types import CLIContext


def _single_mode(coefficients) -> FockVector:
    coefficients = np.asarray(coefficients, dtype=complex)
    if coefficients.size == 0:
        raise ParameterError('empty coefficient list')
    return FockVector(1, coefficients.size - 1, {(n,): c for n, c in enumerate(coefficients) if c != 0})


def _samples_option(func):
    return click.option(
        '-s', '--samples', 'samples_path', type=click.Path(exists=True, dir_okay=False), required=True,
        help='Sample file written by het-sample (CSV or JSON).',
    )(func)


@main.command('het-sample')
@click.option('-c', '--core', type=vector_param, default=None,
              help='Single-mode state as Fock coefficients.')
@click.option('--state', type=json_param, default=None,
              help='A Fock vector or Gaussian state document.')
@click.option('--product', type=json_param, default=None,
              help='A list of single-mode coefficient vectors sampled as a product.')
@click.option('-u', '--unitary', type=matrix_param, default=None,
              help='Interferometer applied to the product state.')
@click.option('-n', '--count', type=click.IntRange(min=0), default=1000, show_default=True)
@click.pass_obj
def het_sample(cli_ctx: CLIContext, core, state, product, unitary, count) -> None:
    """
    Draws heterodyne samples from the Husimi function of a state.
    """
    seed = cli_ctx.require_seed('het-sample')
    inputs = {'core': core, 'state': state, 'product': product, 'unitary': unitary, 'count': count}
    try:
        if sum(v is not None for v in (core, state, product)) != 1:
            raise ParameterError('give exactly one of --core, --state and --product')
        if product is not None:
            states = [_single_mode(decode_vector(v)) for v in product]
            batch = sample_husimi_product(states, count, seed, unitary=unitary)
        elif core is not None:
            batch = sample_husimi(_single_mode(core), count, seed)
        elif 'covariance' in state:
            batch = sample_husimi(decode_gaussian(state), count, seed)
        else:
            batch = sample_husimi(decode_fock(state), count, seed)
    except Exception as e:
        fail(cli_ctx, e)
    data = batch.as_matrix()
    fields = [FieldSpec(f'mode{j}', formatter=complex_output_formatter) for j in range(data.shape[1])]
    rows = [{f'mode{j}': v for j, v in enumerate(row)} for row in data]
    respond(cli_ctx, 'het-sample', inputs, rows, fields, table=True)
    if cli_ctx.out is not None:
        sidecar = pathlib.Path(cli_ctx.out + '.json')
        sidecar.write_text(json.dumps({
            'seed': batch.seed,
            'count': batch.count,
            'modes': batch.modes,
            'metadata': to_jsonable(dict(batch.metadata)),
        }, indent=2), encoding='utf-8')


@main.command('tomo')
@_samples_option
@click.option('-E', '--cutoff', type=click.IntRange(min=0), required=True)
@click.option('--eps', type=float, default=0.1, show_default=True)
@click.option('--eps-prime', type=float, default=0.1, show_default=True)
@click.pass_obj
def tomo(cli_ctx: CLIContext, samples_path, cutoff, eps, eps_prime) -> None:
    """
    Density-matrix tomography from heterodyne samples.
    """
    inputs = {'samples': samples_path, 'cutoff': cutoff, 'eps': eps, 'eps_prime': eps_prime}
    try:
        result = tomo_estimate(load_samples(samples_path), cutoff, eps, eps_prime)
    except Exception as e:
        fail(cli_ctx, e)
    size = result.matrix.shape[0]
    rows = [
        {'k': k, 'l': l, 'rho': result.matrix[k, l], 'bound': result.bound, 'failure': result.failure}
        for k in range(size) for l in range(size)  # noqa: E741
    ]
    respond(cli_ctx, 'tomo', inputs, rows, [
        FieldSpec('k'),
        FieldSpec('l'),
        FieldSpec('rho', formatter=complex_output_formatter),
        FieldSpec('bound', formatter=float_output_formatter),
        FieldSpec('failure', formatter=float_output_formatter),
    ], table=True)


@main.command('tomo-count')
@click.option('-E', '--cutoff', type=click.IntRange(min=0), required=True)
@click.option('--eps', type=float, default=0.1, show_default=True)
@click.option('--eps-prime', type=float, default=0.1, show_default=True)
@click.option('--delta', type=float, default=0.05, show_default=True,
              help='Target failure probability.')
@click.pass_obj
def tomo_count(cli_ctx: CLIContext, cutoff, eps, eps_prime, delta) -> None:
    """
    Number of samples tomography needs for a failure probability δ.
    """
    inputs = {'cutoff': cutoff, 'eps': eps, 'eps_prime': eps_prime, 'delta': delta}
    try:
        result = tomo_sample_count(cutoff, eps, eps_prime, delta)
    except Exception as e:
        fail(cli_ctx, e)
    respond(cli_ctx, 'tomo-count', inputs, {'samples': result},
            [FieldSpec('samples', formatter=count_output_formatter)])


@main.command('certify')
@_samples_option
@click.option('-t', '--target', type=vector_param, required=True,
              help='Target state as Fock coefficients.')
@click.option('-m', '--copies', type=click.IntRange(min=1), default=1, show_default=True)
@click.option('-E', '--cutoff', type=click.IntRange(min=0), required=True)
@click.option('--support', type=click.IntRange(min=0), default=0, show_default=True,
              help='Number of samples allowed outside the energy cutoff.')
@click.option('--eps', type=float, default=0.1, show_default=True)
@click.option('--eps-prime', type=float, default=0.1, show_default=True)
@click.option('--profile', type=float_list, default=None,
              help='Robustness profile R_1,R_2,… for a stellar rank witness.')
@click.pass_obj
def certify(
    cli_ctx: CLIContext, samples_path, target, copies, cutoff, support, eps, eps_prime, profile,
) -> None:
    """
    Certifies the fidelity of the sampled copies with a pure target state.
    """
    inputs = {'samples': samples_path, 'target': target, 'copies': copies, 'cutoff': cutoff,
              'support': support, 'eps': eps, 'eps_prime': eps_prime, 'profile': profile}
    try:
        fidelity, outside, p_support = certify_fidelity(
            load_samples(samples_path), _single_mode(target), copies, cutoff, support, eps, eps_prime,
        )
        rank = rank_witness(fidelity, profile) if profile else None
    except Exception as e:
        fail(cli_ctx, e)
    result = {
        'fidelity': fidelity.value,
        'bound': fidelity.bound,
        'failure': fidelity.failure,
        'clamped': fidelity.clamped,
        'outside': outside,
        'support_passed': outside <= support,
        'p_support': p_support,
        'rank': rank,
    }
    respond(cli_ctx, 'certify', inputs, result, [
        FieldSpec('fidelity', formatter=float_output_formatter),
        FieldSpec('bound', formatter=float_output_formatter),
        FieldSpec('failure', formatter=float_output_formatter),
        FieldSpec('clamped', formatter=bool_output_formatter),
        FieldSpec('outside', formatter=count_output_formatter),
        FieldSpec('support_passed', formatter=bool_output_formatter),
        FieldSpec('p_support', formatter=float_output_formatter),
        FieldSpec('rank'),
    ])


@main.command('wigner-point')
@_samples_option
@click.option('--alpha', type=complex_param, required=True, help='Phase-space point.')
@click.option('--eta', type=float, required=True, help='Smoothing parameter.')
@click.option('-E', '--cutoff', type=click.IntRange(min=0), required=True)
@click.option('--failure', type=float, default=0.05, show_default=True)
@click.pass_obj
def wigner_point_cmd(cli_ctx: CLIContext, samples_path, alpha, eta, cutoff, failure) -> None:
    """
    Estimates the Wigner function at a point from heterodyne samples.
    """
    inputs = {'samples': samples_path, 'alpha': alpha, 'eta': eta, 'cutoff': cutoff, 'failure': failure}
    try:
        result = wigner_point(load_samples(samples_path), alpha, eta, cutoff, failure)
    except Exception as e:
        fail(cli_ctx, e)
    respond(cli_ctx, 'wigner-point', inputs, result)


@main.command('rank-witness')
@click.option('-F', '--fidelity', type=float, required=True, help='Certified fidelity estimate.')
@click.option('--bound', type=click.FloatRange(min=0), required=True,
              help='Additive error bound of the estimate.')
@click.option('--failure', type=float, default=0.05, show_default=True)
@click.option('-R', '--profile', type=float_list, required=True,
              help='Robustness profile R_1,R_2,… of the target.')
@click.pass_obj
def rank_witness_cmd(cli_ctx: CLIContext, fidelity, bound, failure, profile) -> None:
    """
    The largest stellar rank witnessed by a certified fidelity.
    """
    inputs = {'fidelity': fidelity, 'bound': bound, 'failure': failure, 'profile': profile}
    try:
        rank = rank_witness(ConfidenceValue(fidelity, bound, failure), profile)
    except Exception as e:
        fail(cli_ctx, e)
    respond(cli_ctx, 'rank-witness', inputs, {'rank': rank, 'lower': fidelity - bound}, [
        FieldSpec('rank'),
        FieldSpec('lower', humanized_name='F − bound', formatter=float_output_formatter),
    ])


@main.command('verify-bounds')
@click.option('-m', '--copies', type=click.IntRange(min=1), required=True)
@click.option('-E', '--cutoff', type=click.IntRange(min=0), required=True)
@click.option('--support', type=click.IntRange(min=0), default=1, show_default=True)
@click.option('--c-psi', type=float, default=1.0, show_default=True,
              help='The estimator constant of the target.')
@click.option('--family', is_flag=True,
              help='Use the polynomial parameter family instead of explicit sizes.')
@click.option('-n', '--samples', type=float, default=None)
@click.option('-k', '--subsample', type=float, default=None)
@click.option('-q', '--block', type=float, default=None)
@click.option('--eps', type=float, default=None)
@click.option('--eps-prime', type=float, default=None)
@click.pass_obj
def verify_bounds(cli_ctx: CLIContext, copies, cutoff, support, c_psi, family,
                  samples, subsample, block, eps, eps_prime) -> None:
    """
    Failure terms of the finite-copy verification protocol.
    """
    inputs = {'copies': copies, 'cutoff': cutoff, 'support': support, 'c_psi': c_psi, 'family': family,
              'samples': samples, 'k': subsample, 'q': block, 'eps': eps, 'eps_prime': eps_prime}
    try:
        if family:
            budget = parameter_family(copies, cutoff, support)
        else:
            if None in (samples, subsample, block, eps, eps_prime):
                raise ParameterError('explicit budgets need -n, -k, -q, --eps and --eps-prime')
            budget = VerificationBudget(
                samples, copies, cutoff, support, subsample, block, eps, eps_prime,
            )
        bounds = verification_bounds(budget, c_psi)
    except Exception as e:
        fail(cli_ctx, e)
    result = {
        'p_support': bounds.p_support,
        'p_definetti': bounds.p_definetti,
        'p_choice': bounds.p_choice,
        'p_hoeffding': bounds.p_hoeffding,
        'failure': bounds.failure,
        'slack': bounds.slack,
    }
    respond(cli_ctx, 'verify-bounds', inputs, result,
            [FieldSpec(name, formatter=float_output_formatter) for name in result])
