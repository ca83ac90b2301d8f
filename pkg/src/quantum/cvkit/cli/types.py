from __future__ import annotations

import enum
import sys
from typing import (
    List,
    Mapping,
    Optional,
    Sequence,
    TYPE_CHECKING,
)

import attr
import click

if TYPE_CHECKING:
    from ..config import CVKitConfig
    from ..output.types import BaseOutputHandler


class OutputMode(enum.Enum):
    CONSOLE = 'console'
    JSON = 'json'
    CSV = 'csv'


@attr.define(slots=True)
class CLIContext:
    config: CVKitConfig = attr.field()
    output_mode: OutputMode = attr.field()
    seed: Optional[int] = attr.field(default=None)
    out: Optional[str] = attr.field(default=None)
    output: BaseOutputHandler = attr.field(default=None)
    _written: bool = attr.field(default=False)

    def write(self, text: str) -> None:
        if self.out is None:
            click.echo(text, file=sys.stdout)
            return
        # one result per invocation; later writes append
        with open(self.out, 'a' if self._written else 'w', encoding='utf-8') as f:
            f.write(text + '\n')
        self._written = True

    def require_seed(self, verb: str) -> int:
        if self.seed is None:
            raise click.UsageError(f'{verb} draws random samples and needs --seed')
        return self.seed


@attr.define(slots=True, frozen=True)
class RunConfig:
    """
    A complete command-line invocation, usable to replay a run.

    Attributes:
        verb: The subcommand name.
        args: The subcommand arguments and options.
        seed: The sampler seed.
        output_format: One of ``json``, ``csv`` and ``console``.
        out: The result file; stdout if not set.
        tolerances: Overrides of the shared tolerance record.
    """

    verb: str
    args: Sequence[str] = attr.field(factory=tuple, converter=tuple)
    seed: Optional[int] = None
    output_format: str = 'json'
    out: Optional[str] = None
    tolerances: Mapping[str, float] = attr.field(factory=dict)

    def to_argv(self) -> List[str]:
        argv = ['--format', self.output_format]
        if self.seed is not None:
            argv += ['--seed', str(self.seed)]
        if self.out is not None:
            argv += ['--out', self.out]
        for name, value in sorted(self.tolerances.items()):
            argv += [f'--tol.{name}', repr(float(value))]
        return argv + [self.verb, *self.args]
