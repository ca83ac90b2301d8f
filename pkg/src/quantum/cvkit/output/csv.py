from __future__ import annotations

import csv
import io
from typing import (
    Any,
    Iterable,
    Mapping,
    Optional,
    Sequence,
)

from ..codec import to_jsonable
from ..exceptions import describe
from .types import BaseOutputHandler, Envelope, FieldSpec


def _flatten(prefix: str, value: Any) -> Iterable[Sequence[str]]:
    if isinstance(value, Mapping):
        for k, v in value.items():
            yield from _flatten(f"{prefix}.{k}" if prefix else str(k), v)
    elif isinstance(value, list) and value and not all(isinstance(v, (int, float)) for v in value):
        for idx, v in enumerate(value):
            yield from _flatten(f"{prefix}.{idx}", v)
    elif isinstance(value, list):
        # [re, im] pairs and plain numeric vectors
        yield (prefix, *(str(v) for v in value))
    else:
        yield (prefix, "" if value is None else str(value))


class CsvOutputHandler(BaseOutputHandler):
    """
    Plot-ready output: tables become a header row plus one line per row,
    other results become ``key,value`` lines.
    """

    def _write(self, rows: Iterable[Sequence[str]]) -> None:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerows(rows)
        self.emit(buf.getvalue().rstrip("\n"))

    def print_envelope(
        self,
        envelope: Envelope,
        result: Any,
        fields: Optional[Sequence[FieldSpec]] = None,
    ) -> None:
        if fields is not None:
            field_map = {f.field_name: f for f in fields}
            lines = [
                (field_map[k].alt_name, *field_map[k].formatter.format_csv(v, field_map[k]))
                for k, v in result.items()
                if k in field_map
            ]
        else:
            lines = list(_flatten("result", to_jsonable(result)))
        self._write([("key", "value"), *lines])

    def print_table(
        self,
        envelope: Envelope,
        rows: Sequence[Mapping[str, Any]],
        fields: Sequence[FieldSpec],
    ) -> None:
        header = [h for f in fields for h in f.csv_headers()]
        body = [
            [cell for f in fields for cell in f.formatter.format_csv(row.get(f.field_name), f)]
            for row in rows
        ]
        self._write([header, *body])

    def print_error(
        self,
        error: Exception,
    ) -> None:
        kind, detail = describe(error)
        self._write([("error", "detail"), (kind, detail)])

    def print_fail(
        self,
        message: str,
    ) -> None:
        self._write([("error",), (message,)])
