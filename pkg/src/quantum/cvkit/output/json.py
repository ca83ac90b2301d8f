from __future__ import annotations

import json
from typing import (
    Any,
    Mapping,
    Optional,
    Sequence,
)

from ..codec import to_jsonable
from ..exceptions import describe
from .types import BaseOutputHandler, Envelope, FieldSpec

_json_opts: Mapping[str, Any] = {"indent": 2}


def _record(item: Mapping[str, Any], fields: Sequence[FieldSpec]) -> Mapping[str, Any]:
    field_map = {f.field_name: f for f in fields}
    return {
        field_map[k].alt_name: field_map[k].formatter.format_json(v, field_map[k])
        for k, v in item.items()
        if k in field_map
    }


class JsonOutputHandler(BaseOutputHandler):

    def print_envelope(
        self,
        envelope: Envelope,
        result: Any,
        fields: Optional[Sequence[FieldSpec]] = None,
    ) -> None:
        if fields is not None:
            result = _record(result, fields)
        self.emit(json.dumps(envelope.wrap(to_jsonable(result)), **_json_opts))

    def print_table(
        self,
        envelope: Envelope,
        rows: Sequence[Mapping[str, Any]],
        fields: Sequence[FieldSpec],
    ) -> None:
        self.emit(json.dumps(
            envelope.wrap([_record(row, fields) for row in rows]),
            **_json_opts,
        ))

    def print_error(
        self,
        error: Exception,
    ) -> None:
        kind, detail = describe(error)
        self.emit(json.dumps(
            {
                "error": kind,
                "detail": detail,
            },
            **_json_opts,
        ))

    def print_fail(
        self,
        message: str,
    ) -> None:
        self.emit(json.dumps(
            {
                "error": message,
            },
            **_json_opts,
        ))
