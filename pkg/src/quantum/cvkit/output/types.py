from __future__ import annotations

from abc import ABCMeta, abstractmethod
from collections import UserDict
from typing import (
    Any,
    Mapping,
    Optional,
    Sequence,
    TYPE_CHECKING,
)

import attr

if TYPE_CHECKING:
    from quantum.cvkit.cli.types import CLIContext


_predefined_humanized_field_names = {
    "p_h": "P_h",
    "p_ab": "P_ab",
    "p_d_q": "P_d (quantum)",
    "p_d_c": "P_d (classical)",
    "eta": "η",
    "xi": "ξ",
    "alpha": "α",
}


def _make_camel_case(name: str) -> str:
    return " ".join(
        map(lambda s: s[0].upper() + s[1:], name.split("_")),
    )


class AbstractOutputFormatter(metaclass=ABCMeta):
    """
    The base implementation of output formats.
    """

    @abstractmethod
    def format_console(self, value: Any, field: FieldSpec) -> str:
        raise NotImplementedError

    @abstractmethod
    def format_json(self, value: Any, field: FieldSpec) -> Any:
        raise NotImplementedError

    @abstractmethod
    def format_csv(self, value: Any, field: FieldSpec) -> Sequence[str]:
        """One or more CSV cells; complex values occupy two columns."""
        raise NotImplementedError

    def csv_headers(self, field: FieldSpec) -> Sequence[str]:
        return (field.alt_name,)


@attr.define(slots=True, frozen=True)
class FieldSpec:
    """
    How a result column is named and rendered by the output handlers.

    Attributes:
        field_name: The key of the column inside result rows.
        humanized_name: The column title of console tables.  If not set, it's
            auto-generated from field_name by camel-casing it and checking
            a predefined humanization mapping.
        alt_name: The key used in JSON rows and CSV headers.
        formatter: The formatter instance which provides per-output-type
            format methods (console, json and csv).
    """

    field_name: str = attr.field()
    humanized_name: str = attr.field()
    alt_name: str = attr.field()
    formatter: AbstractOutputFormatter = attr.field()

    @humanized_name.default
    def _autogen_humanized_name(self) -> str:
        if h := _predefined_humanized_field_names.get(self.field_name):
            return h
        if self.field_name.startswith("is_"):
            return _make_camel_case(self.field_name[3:]) + "?"
        return _make_camel_case(self.field_name)

    @alt_name.default
    def _default_alt_name(self) -> str:
        return self.field_name

    @formatter.default
    def _default_formatter(self) -> AbstractOutputFormatter:
        from .formatters import default_output_formatter  # avoid circular import
        return default_output_formatter

    def csv_headers(self) -> Sequence[str]:
        return self.formatter.csv_headers(self)


class FieldSet(UserDict, Mapping[str, FieldSpec]):

    def __init__(self, fields: Sequence[FieldSpec]) -> None:
        super().__init__({
            f.alt_name: f for f in fields
        })


@attr.define(slots=True, frozen=True)
class Envelope:
    """
    The reproducibility header that accompanies every result.
    """

    verb: str
    inputs_digest: str
    seed: Optional[int]

    def wrap(self, result: Any) -> Mapping[str, Any]:
        return {
            'verb': self.verb,
            'inputs_digest': self.inputs_digest,
            'seed': self.seed,
            'result': result,
        }


class BaseOutputHandler(metaclass=ABCMeta):

    def __init__(self, cli_context: CLIContext) -> None:
        self.ctx = cli_context

    def emit(self, text: str) -> None:
        self.ctx.write(text)

    @abstractmethod
    def print_envelope(
        self,
        envelope: Envelope,
        result: Any,
        fields: Optional[Sequence[FieldSpec]] = None,
    ) -> None:
        """Prints a single result, optionally a record described by *fields*."""
        raise NotImplementedError

    @abstractmethod
    def print_table(
        self,
        envelope: Envelope,
        rows: Sequence[Mapping[str, Any]],
        fields: Sequence[FieldSpec],
    ) -> None:
        raise NotImplementedError

    @abstractmethod
    def print_error(
        self,
        error: Exception,
    ) -> None:
        raise NotImplementedError

    @abstractmethod
    def print_fail(
        self,
        message: str,
    ) -> None:
        raise NotImplementedError
