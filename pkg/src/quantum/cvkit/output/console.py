from __future__ import annotations

from typing import (
    Any,
    Mapping,
    Optional,
    Sequence,
)

from tabulate import tabulate

from quantum.cvkit.cli.pretty import print_error, print_fail
from ..codec import to_jsonable
from .types import BaseOutputHandler, Envelope, FieldSpec


class ConsoleOutputHandler(BaseOutputHandler):

    def print_envelope(
        self,
        envelope: Envelope,
        result: Any,
        fields: Optional[Sequence[FieldSpec]] = None,
    ) -> None:
        if fields is None:
            value = to_jsonable(result)
            items = value.items() if isinstance(value, Mapping) else [("result", value)]
            rows = [(k, v) for k, v in items]
        else:
            field_map = {f.field_name: f for f in fields}
            rows = [
                (
                    field_map[k].humanized_name,
                    field_map[k].formatter.format_console(v, field_map[k]),
                )
                for k, v in result.items()
                if k in field_map
            ]
        self.emit(tabulate(rows, headers=('Field', 'Value')))

    def print_table(
        self,
        envelope: Envelope,
        rows: Sequence[Mapping[str, Any]],
        fields: Sequence[FieldSpec],
    ) -> None:
        if not rows:
            self.emit("No rows.")
            return
        self.emit(tabulate(
            [
                [f.formatter.format_console(row.get(f.field_name), f) for f in fields]
                for row in rows
            ],
            headers=[f.humanized_name for f in fields],
        ))

    def print_error(
        self,
        error: Exception,
    ) -> None:
        print_error(error)

    def print_fail(
        self,
        message: str,
    ) -> None:
        print_fail(message)
