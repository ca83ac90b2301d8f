import logging
import sys
import warnings
from typing import (
    Any,
    Callable,
    Mapping,
    Optional,
    Sequence,
)

import click

from .. import __version__
from ..codec import inputs_digest
from ..config import CVKitConfig, Tolerances, set_config
from ..output import get_output_handler
from ..output.types import Envelope, FieldSpec
from .types import CLIContext, OutputMode, RunConfig

log = logging.getLogger('quantum.cvkit.cli')


def _tolerance_options(func: Callable) -> Callable:
    for name in reversed(Tolerances.names()):
        func = click.option(
            f'--tol.{name}', f'tol_{name}', type=float, default=None,
            help=f'Override the {name} tolerance.',
        )(func)
    return func


@click.group(
    context_settings={
        'help_option_names': ['-h', '--help'],
    },
)
@click.option('--seed', type=int, default=None,
              help='Seed of the random number generator (required by sampling commands).')
@click.option('--out', type=click.Path(dir_okay=False), default=None,
              help='Write the result to this file instead of stdout.')
@click.option('--format', 'output', type=click.Choice(['json', 'csv', 'console']), default='json',
              help='Set the output style of the command results.')
@_tolerance_options
@click.version_option(version=__version__)
@click.pass_context
def main(ctx: click.Context, seed: Optional[int], out: Optional[str], output: str, **tolerances) -> None:
    """
    Continuous-variable quantum information toolkit.
    """
    overrides = {name: tolerances[f'tol_{name}'] for name in Tolerances.names()}
    config = CVKitConfig(tolerances=Tolerances.from_env().replace(**overrides))
    set_config(config)
    logging.basicConfig(
        level=config.log_level,
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
    )

    output_mode = OutputMode(output)
    cli_ctx = CLIContext(
        config=config,
        output_mode=output_mode,
        seed=seed,
        out=out,
    )
    cli_ctx.output = get_output_handler(cli_ctx, output_mode)
    ctx.obj = cli_ctx

    from .pretty import show_warning
    warnings.showwarning = show_warning


def respond(
    cli_ctx: CLIContext,
    verb: str,
    inputs: Mapping[str, Any],
    result: Any,
    fields: Optional[Sequence[FieldSpec]] = None,
    *,
    table: bool = False,
) -> None:
    """Prints *result* inside the reproducibility envelope of *verb*."""
    envelope = Envelope(verb, inputs_digest(inputs), cli_ctx.seed)
    if table:
        cli_ctx.output.print_table(envelope, result, fields or [])
    else:
        cli_ctx.output.print_envelope(envelope, result, fields)


def fail(cli_ctx: CLIContext, error: Exception) -> None:
    log.debug('command failed', exc_info=error)
    cli_ctx.output.print_error(error)
    sys.exit(1)


def dispatch(run: RunConfig) -> int:
    """
    Runs one command line in-process and returns its exit status: 0 on
    success, 1 on a computation error and 2 on a usage error.
    """
    try:
        main.main(args=run.to_argv(), prog_name='cvkit', standalone_mode=False)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 1
    return 0
