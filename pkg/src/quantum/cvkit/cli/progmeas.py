import math

import click

from ..exceptions import ParameterError
from ..fock import enumerate_sector
from ..progmeas import (
    coherent_no_click,
    coherent_scheme_stats,
    distinguishability_probs,
    group_interferometer,
    hadamard_walsh,
    looped_merger_no_click,
    merger_imperfect,
    merger_interferometer,
    parity_postprocess,
    pi_statistic,
    sign_matrix,
    swap_test_stats,
)
from ..output.formatters import bool_output_formatter, complex_output_formatter, float_output_formatter
from ..output.types import FieldSpec
from .main import fail, main, respond
from .params import complex_param, int_list, matrix_param, occupation_param
from .types import CLIContext


@main.command('swap-stats')
@click.option('-m', '--copies', type=click.IntRange(min=2), required=True)
@click.option('-x', '--overlap', type=float, required=True,
              help='Squared overlap of the compared states.')
@click.pass_obj
def swap_stats(cli_ctx: CLIContext, copies, overlap) -> None:
    """
    Acceptance probability of the generalized swap test.
    """
    inputs = {'copies': copies, 'overlap': overlap}
    try:
        accept = swap_test_stats(copies, overlap)
    except Exception as e:
        fail(cli_ctx, e)
    respond(cli_ctx, 'swap-stats', inputs, {'accept': accept, 'reject': 1.0 - accept},
            [FieldSpec(name, formatter=float_output_formatter) for name in ('accept', 'reject')])


@main.command('hadamard-accept')
@click.option('--order', type=click.IntRange(min=1), default=None,
              help='Use the Hadamard–Walsh interferometer on 2^order modes.')
@click.option('--factors', type=int_list, default=None,
              help='Use the Fourier interferometer of Z_a1 × Z_a2 × …')
@click.option('-d', '--outcome', type=occupation_param, default=None,
              help='A single outcome; every m-photon outcome is listed if omitted.')
@click.pass_obj
def hadamard_accept(cli_ctx: CLIContext, order, factors, outcome) -> None:
    """
    Statistics of the generalized swap test for m single photons.
    """
    inputs = {'order': order, 'factors': factors, 'outcome': outcome}
    try:
        if (order is None) == (factors is None):
            raise ParameterError('give exactly one of --order and --factors')
        if order is not None:
            unitary = hadamard_walsh(order)
            signs = sign_matrix(order)
        else:
            unitary = group_interferometer(factors)
            signs = unitary * math.sqrt(unitary.shape[0])
        m = unitary.shape[0]
        outcomes = [outcome] if outcome is not None else enumerate_sector(m, m)
        rows = []
        for d in outcomes:
            pr_i, pr_d = distinguishability_probs(unitary, d)
            pi = pi_statistic(signs, d)
            accepted = parity_postprocess(signs, d) == 0 if order is not None \
                else bool(abs(pi - m) < 1e-9 * m)
            rows.append({'outcome': d, 'pi': pi, 'accepted': accepted, 'pr_i': pr_i, 'pr_d': pr_d})
    except Exception as e:
        fail(cli_ctx, e)
    respond(cli_ctx, 'hadamard-accept', inputs, rows, [
        FieldSpec('outcome'),
        FieldSpec('pi', humanized_name='π(d)', formatter=complex_output_formatter),
        FieldSpec('accepted', formatter=bool_output_formatter),
        FieldSpec('pr_i', humanized_name='Pr (indist.)', formatter=float_output_formatter),
        FieldSpec('pr_d', humanized_name='Pr (dist.)', formatter=float_output_formatter),
    ], table=True)


@main.command('distinguishability')
@click.option('-u', '--unitary', type=matrix_param, required=True)
@click.option('-d', '--outcome', type=occupation_param, required=True)
@click.pass_obj
def distinguishability(cli_ctx: CLIContext, unitary, outcome) -> None:
    """
    Outcome probability with indistinguishable photons and with the
    first photon distinguishable.
    """
    inputs = {'unitary': unitary, 'outcome': outcome}
    try:
        pr_i, pr_d = distinguishability_probs(unitary, outcome)
    except Exception as e:
        fail(cli_ctx, e)
    respond(cli_ctx, 'distinguishability', inputs, {'pr_i': pr_i, 'pr_d': pr_d}, [
        FieldSpec('pr_i', formatter=float_output_formatter),
        FieldSpec('pr_d', formatter=float_output_formatter),
    ])


@main.command('coherent-scheme')
@click.option('-m', '--modes', type=click.IntRange(min=2), required=True)
@click.option('-x', '--overlap', type=float, default=None,
              help='Squared overlap of the compared states.')
@click.option('--alpha', type=complex_param, default=None,
              help='Coherent amplitude of the first state.')
@click.option('--beta', type=complex_param, default=None,
              help='Coherent amplitude of the remaining states.')
@click.option('--eta', type=float, default=1.0, show_default=True)
@click.pass_obj
def coherent_scheme(cli_ctx: CLIContext, modes, overlap, alpha, beta, eta) -> None:
    """
    No-click statistics of the coherent-state merger scheme.

    With --alpha and --beta the no-click probability is computed by
    propagating coherent amplitudes through the merger and its looped
    variant; otherwise from the squared overlap.
    """
    inputs = {'modes': modes, 'overlap': overlap, 'alpha': alpha, 'beta': beta, 'eta': eta}
    try:
        result = {}
        if alpha is not None and beta is not None:
            overlap = math.exp(-abs(alpha - beta) ** 2)
            rounds = int(round(math.log2(modes)))
            unitary = merger_interferometer(modes)
            amplitudes = [alpha] + [beta] * (modes - 1)
            detected = [1 << k for k in range(rounds)]
            result['merger_no_click'] = coherent_no_click(unitary, amplitudes, detected, eta)
            result['looped_no_click'] = looped_merger_no_click(alpha, beta, rounds, eta)
        elif overlap is None:
            raise ParameterError('give --overlap or both --alpha and --beta')
        no_click, single_gap, coherent_gap = coherent_scheme_stats(modes, overlap)
        result.update({
            'overlap': overlap,
            'no_click': no_click,
            'single_photon_gap': single_gap,
            'coherent_gap': coherent_gap,
        })
    except Exception as e:
        fail(cli_ctx, e)
    respond(cli_ctx, 'coherent-scheme', inputs, result,
            [FieldSpec(name, formatter=float_output_formatter) for name in result])


@main.command('merger-imperfect')
@click.option('--alpha', type=complex_param, required=True)
@click.option('--beta', type=complex_param, required=True)
@click.option('--nu', type=float, required=True, help='Beam-splitter visibility.')
@click.option('--eta', type=float, default=1.0, show_default=True, help='Detector efficiency.')
@click.pass_obj
def merger_imperfect_cmd(cli_ctx: CLIContext, alpha, beta, nu, eta) -> None:
    """
    Completeness and soundness of the two- and four-mode mergers with
    imperfect beam splitters.
    """
    inputs = {'alpha': alpha, 'beta': beta, 'nu': nu, 'eta': eta}
    try:
        c2, c4, s2, s4 = merger_imperfect(alpha, beta, nu, eta)
    except Exception as e:
        fail(cli_ctx, e)
    result = {'c2': c2, 'c4': c4, 's2': s2, 's4': s4}
    respond(cli_ctx, 'merger-imperfect', inputs, result,
            [FieldSpec(name, formatter=float_output_formatter) for name in result])
