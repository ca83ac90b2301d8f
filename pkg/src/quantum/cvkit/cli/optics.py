from typing import (
    Any,
    Mapping,
)

import click

from ..interf import (
    AdaptiveCircuit,
    TableStages,
    adaptive_final_probability,
    adaptive_overlap,
    bs_distribution,
    bs_probability,
    bs_sample,
)
from ..output.formatters import complex_output_formatter, float_output_formatter
from ..output.types import FieldSpec
from .main import fail, main, respond
from .params import json_param, matrix_param, occupation_param
from .types import CLIContext


def _stages(table: Mapping[str, Any]) -> TableStages:
    from ..codec import decode_matrix
    parsed = {}
    for key, value in (table or {}).items():
        prefix = tuple(int(v) for v in str(key).split(',') if v.strip() != '')
        parsed[prefix] = decode_matrix(value)
    return TableStages(parsed)


@main.command('bs-prob')
@click.option('-u', '--unitary', type=matrix_param, required=True,
              help='The interferometer as JSON (or @file).')
@click.option('-i', '--input', 'inp', type=occupation_param, required=True,
              help='Input occupation, e.g. 1,1,0.')
@click.option('-o', '--outcome', type=occupation_param, default=None,
              help='Output occupation; the whole sector is listed if omitted.')
@click.pass_obj
def bs_prob(cli_ctx: CLIContext, unitary, inp, outcome) -> None:
    """
    Photon-counting probabilities of a Fock input through an interferometer.
    """
    inputs = {'unitary': unitary, 'input': inp, 'outcome': outcome}
    try:
        if outcome is not None:
            result = bs_probability(unitary, inp, outcome)
        else:
            outcomes, probs = bs_distribution(unitary, inp)
    except Exception as e:
        fail(cli_ctx, e)
    if outcome is not None:
        respond(cli_ctx, 'bs-prob', inputs, result)
        return
    rows = [{'outcome': occ, 'probability': p} for occ, p in zip(outcomes, probs)]
    respond(cli_ctx, 'bs-prob', inputs, rows, [
        FieldSpec('outcome'),
        FieldSpec('probability', formatter=float_output_formatter),
    ], table=True)


@main.command('bs-sample')
@click.option('-u', '--unitary', type=matrix_param, required=True)
@click.option('-i', '--input', 'inp', type=occupation_param, required=True)
@click.option('-n', '--count', type=click.IntRange(min=0), default=1000, show_default=True)
@click.pass_obj
def bs_sample_cmd(cli_ctx: CLIContext, unitary, inp, count) -> None:
    """
    Draws photon-counting outcomes by sequential mode-by-mode sampling.
    """
    seed = cli_ctx.require_seed('bs-sample')
    try:
        drawn = bs_sample(unitary, inp, count, seed)
    except Exception as e:
        fail(cli_ctx, e)
    modes = drawn.shape[1] if drawn.ndim == 2 else len(inp)
    fields = [FieldSpec(f'mode{j}') for j in range(modes)]
    rows = [{f'mode{j}': int(v) for j, v in enumerate(row)} for row in drawn]
    respond(cli_ctx, 'bs-sample', {'unitary': unitary, 'input': inp, 'count': count},
            rows, fields, table=True)


def _adaptive_options(func):
    func = click.option('--stages', type=json_param, default='{}',
                        help='Stage unitaries keyed by measured prefix, e.g. {"1": [[...]]}.')(func)
    func = click.option('-k', '--adaptive', 'adaptive_modes', type=click.IntRange(min=0), required=True,
                        help='Number of adaptively measured modes.')(func)
    func = click.option('-n', '--photons', type=click.IntRange(min=0), required=True)(func)
    func = click.option('-u', '--unitary', type=matrix_param, required=True,
                        help='The first-stage interferometer.')(func)
    return func


@main.command('adaptive-prob')
@_adaptive_options
@click.option('-f', '--final', type=occupation_param, required=True,
              help='Outcome on the modes after the adaptive ones.')
@click.pass_obj
def adaptive_prob(cli_ctx: CLIContext, unitary, photons, adaptive_modes, stages, final) -> None:
    """
    Probability of a final outcome of an adaptive interferometer, summed
    over the intermediate measurement results.
    """
    inputs = {'unitary': unitary, 'photons': photons, 'adaptive': adaptive_modes,
              'stages': stages, 'final': final}
    try:
        circuit = AdaptiveCircuit(unitary.shape[0], photons, adaptive_modes, unitary, _stages(stages))
        result = adaptive_final_probability(circuit, final)
    except Exception as e:
        fail(cli_ctx, e)
    respond(cli_ctx, 'adaptive-prob', inputs, result)


@main.command('adaptive-overlap')
@_adaptive_options
@click.option('-p', '--prefix-p', type=occupation_param, required=True)
@click.option('-q', '--prefix-q', type=occupation_param, required=True)
@click.pass_obj
def adaptive_overlap_cmd(
    cli_ctx: CLIContext, unitary, photons, adaptive_modes, stages, prefix_p, prefix_q,
) -> None:
    """
    Overlap of the post-measurement branches selected by two prefixes.
    """
    inputs = {'unitary': unitary, 'photons': photons, 'adaptive': adaptive_modes,
              'stages': stages, 'p': prefix_p, 'q': prefix_q}
    try:
        circuit = AdaptiveCircuit(unitary.shape[0], photons, adaptive_modes, unitary, _stages(stages))
        result = adaptive_overlap(circuit, prefix_p, circuit, prefix_q)
    except Exception as e:
        fail(cli_ctx, e)
    respond(cli_ctx, 'adaptive-overlap', inputs, {'overlap': result},
            [FieldSpec('overlap', formatter=complex_output_formatter)])
