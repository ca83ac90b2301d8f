import click

from ..codec import load_samples
from ..mverify import bs_witness, product_fidelity_bounds, required_copies
from ..output.formatters import bool_output_formatter, count_output_formatter, float_output_formatter
from ..output.types import FieldSpec
from .main import fail, main, respond
from .params import int_list, matrix_param
from .types import CLIContext


@main.command('bs-verify')
@click.option('-s', '--samples', 'samples_path', required=True,
              type=click.Path(exists=True, dir_okay=False),
              help='Multimode heterodyne samples written by het-sample.')
@click.option('-u', '--unitary', type=matrix_param, required=True,
              help='The interferometer of the Boson Sampling experiment.')
@click.option('-n', '--photons', type=click.IntRange(min=0), required=True)
@click.option('--epsilon', type=float, default=0.3, show_default=True)
@click.option('--input-modes', type=int_list, default=None,
              help='Occupied input modes when they are not the first n.')
@click.pass_obj
def bs_verify(cli_ctx: CLIContext, samples_path, unitary, photons, epsilon, input_modes) -> None:
    """
    Fidelity witness of a Boson Sampling output state from heterodyne samples.
    """
    inputs = {'samples': samples_path, 'unitary': unitary, 'photons': photons,
              'epsilon': epsilon, 'input_modes': input_modes}
    try:
        report = bs_witness(load_samples(samples_path), unitary, photons, epsilon, input_modes)
        lower, product = product_fidelity_bounds(
            [min(1.0, max(0.0, f)) for f in report.fidelities])
    except Exception as e:
        fail(cli_ctx, e)
    result = {
        'witness': report.witness,
        'slack': report.slack,
        'failure': report.failure,
        'accepted': report.accepted,
        'samples': report.samples,
        'fidelities': list(report.fidelities),
        'product_lower': lower,
        'product_upper': product,
    }
    respond(cli_ctx, 'bs-verify', inputs, result, [
        FieldSpec('witness', formatter=float_output_formatter),
        FieldSpec('slack', formatter=float_output_formatter),
        FieldSpec('failure', formatter=float_output_formatter),
        FieldSpec('accepted', formatter=bool_output_formatter),
        FieldSpec('samples', formatter=count_output_formatter),
        FieldSpec('fidelities'),
        FieldSpec('product_lower', formatter=float_output_formatter),
        FieldSpec('product_upper', formatter=float_output_formatter),
    ])


@main.command('bs-copies')
@click.option('-m', '--modes', type=click.IntRange(min=1), required=True)
@click.option('-n', '--photons', type=click.IntRange(min=0), required=True)
@click.option('--epsilon', type=float, default=0.3, show_default=True)
@click.option('--failure', type=float, default=0.05, show_default=True)
@click.pass_obj
def bs_copies(cli_ctx: CLIContext, modes, photons, epsilon, failure) -> None:
    """
    Number of copies the Boson Sampling witness needs.
    """
    inputs = {'modes': modes, 'photons': photons, 'epsilon': epsilon, 'failure': failure}
    try:
        result = required_copies(modes, photons, epsilon, failure)
    except Exception as e:
        fail(cli_ctx, e)
    respond(cli_ctx, 'bs-copies', inputs, {'copies': result},
            [FieldSpec('copies', formatter=count_output_formatter)])
