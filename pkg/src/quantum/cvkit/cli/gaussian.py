import click
import numpy as np

from ..codec import decode_elements, decode_fock
from ..gaussian import (
    CvsCircuit,
    GaussianCircuit,
    cvs_origin_density,
    embed_orthogonal,
    gcore_density,
)
from .main import fail, main, respond
from .params import json_param, matrix_param, vector_param
from .types import CLIContext


@main.command('gcore-density')
@click.option('-e', '--elements', type=json_param, required=True,
              help='Gaussian elements applied left to right, '
                   'e.g. [{"squeeze": 0.3}, {"passive": [[1]]}].')
@click.option('-c', '--core', type=json_param, required=True,
              help='The core state as a Fock vector document.')
@click.option('-p', '--point', type=vector_param, required=True,
              help='The heterodyne outcome α.')
@click.pass_obj
def gcore_density_cmd(cli_ctx: CLIContext, elements, core, point) -> None:
    """
    Heterodyne density of a core state sent through a Gaussian circuit.
    """
    inputs = {'elements': elements, 'core': core, 'point': point}
    try:
        state = decode_fock(core)
        circuit = GaussianCircuit(state.modes, decode_elements(elements))
        result = gcore_density(circuit, state, point)
    except Exception as e:
        fail(cli_ctx, e)
    respond(cli_ctx, 'gcore-density', inputs, result)


@main.command('cvs-origin')
@click.option('-m', '--modes', type=click.IntRange(min=1), required=True)
@click.option('-n', '--photons', type=click.IntRange(min=0), required=True)
@click.option('--xi', type=float, required=True, help='Input squeezing.')
@click.option('--zeta', type=float, required=True, help='Detection squeezing.')
@click.option('--phi', type=float, required=True)
@click.option('--sigma', type=matrix_param, required=True,
              help='Symmetric orthogonal Σ.')
@click.option('--orthogonal', type=matrix_param, default=None,
              help='The orthogonal O; the identity if omitted.')
@click.pass_obj
def cvs_origin_cmd(cli_ctx: CLIContext, modes, photons, xi, zeta, phi, sigma, orthogonal) -> None:
    """
    Output density at the origin of a squeezed-input interferometer.
    """
    if orthogonal is None:
        orthogonal = np.eye(modes)
    inputs = {'modes': modes, 'photons': photons, 'xi': xi, 'zeta': zeta, 'phi': phi,
              'sigma': sigma, 'orthogonal': orthogonal}
    try:
        circuit = CvsCircuit(modes, photons, xi, zeta, phi, np.real(sigma), np.real(orthogonal))
        result = cvs_origin_density(circuit)
    except Exception as e:
        fail(cli_ctx, e)
    respond(cli_ctx, 'cvs-origin', inputs, result)


@main.command('embed-sigma')
@click.option('-x', '--matrix', type=matrix_param, required=True,
              help='The real p×p matrix to embed.')
@click.option('-m', '--modes', type=click.IntRange(min=1), required=True)
@click.option('--nu', type=float, default=None,
              help='Scale ν; defaults to 1/‖X‖ so the embedding exists.')
@click.pass_obj
def embed_sigma_cmd(cli_ctx: CLIContext, matrix, modes, nu) -> None:
    """
    Symmetric orthogonal matrix whose top-left block hafnian is ν^p Per(X).
    """
    inputs = {'matrix': matrix, 'modes': modes, 'nu': nu}
    try:
        if nu is None:
            norm = float(np.linalg.norm(np.real(matrix), 2))
            nu = 1.0 / norm if norm > 0 else 1.0
        result = embed_orthogonal(matrix, modes, nu)
    except Exception as e:
        fail(cli_ctx, e)
    respond(cli_ctx, 'embed-sigma', inputs, {'nu': nu, 'sigma': np.real(result)})
