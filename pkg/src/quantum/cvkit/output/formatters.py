from __future__ import annotations

import datetime
import math
from typing import (
    Any,
    Sequence,
)

import humanize

from ..codec import to_jsonable
from .types import AbstractOutputFormatter, FieldSpec


def format_value(value: Any) -> str:
    if value is None:
        return "(null)"
    if isinstance(value, (dict, list, set)) and not value:
        return "(empty)"
    return str(value)


class OutputFormatter(AbstractOutputFormatter):
    """
    The base implementation of output formats.
    """

    def format_console(self, value: Any, field: FieldSpec) -> str:
        if value is None:
            return "(null)"
        if isinstance(value, (dict, list, set)) and not value:
            return "(empty)"
        elif isinstance(value, dict):
            return "{" \
                + ", ".join(f"{k}: {self.format_console(v, field)}" for k, v in value.items()) \
                + "}"
        elif isinstance(value, (list, tuple, set)):
            return "[" \
                + ", ".join(self.format_console(v, field) for v in value) \
                + "]"
        return str(value)

    def format_json(self, value: Any, field: FieldSpec) -> Any:
        return to_jsonable(value)

    def format_csv(self, value: Any, field: FieldSpec) -> Sequence[str]:
        if value is None:
            return ("",)
        if isinstance(value, (list, tuple)):
            return (" ".join(str(v) for v in value),)
        return (str(value),)


class FloatOutputFormatter(OutputFormatter):

    def __init__(self, digits: int = 6) -> None:
        self._digits = digits

    def format_console(self, value: Any, field: FieldSpec) -> str:
        if value is None or math.isnan(value):
            return "-"
        return f"{value:.{self._digits}g}"

    def format_json(self, value: Any, field: FieldSpec) -> Any:
        return None if value is None else float(value)

    def format_csv(self, value: Any, field: FieldSpec) -> Sequence[str]:
        return ("" if value is None else repr(float(value)),)


class ComplexOutputFormatter(OutputFormatter):

    def __init__(self, digits: int = 6) -> None:
        self._digits = digits

    def format_console(self, value: Any, field: FieldSpec) -> str:
        z = complex(value)
        sign = '-' if z.imag < 0 else '+'
        return f"{z.real:.{self._digits}g} {sign} {abs(z.imag):.{self._digits}g}i"

    def format_csv(self, value: Any, field: FieldSpec) -> Sequence[str]:
        z = complex(value)
        return (repr(z.real), repr(z.imag))

    def csv_headers(self, field: FieldSpec) -> Sequence[str]:
        return (f"{field.alt_name}_re", f"{field.alt_name}_im")


class BoolOutputFormatter(OutputFormatter):

    def format_console(self, value: Any, field: FieldSpec) -> str:
        return "yes" if value else "no"

    def format_json(self, value: Any, field: FieldSpec) -> Any:
        return bool(value)

    def format_csv(self, value: Any, field: FieldSpec) -> Sequence[str]:
        return ("1" if value else "0",)


class DurationOutputFormatter(OutputFormatter):
    """Seconds, humanized on the console."""

    def format_console(self, value: Any, field: FieldSpec) -> str:
        delta = datetime.timedelta(seconds=float(value))
        return humanize.precisedelta(delta, minimum_unit='milliseconds')

    def format_json(self, value: Any, field: FieldSpec) -> Any:
        return float(value)


class CountOutputFormatter(OutputFormatter):

    def format_console(self, value: Any, field: FieldSpec) -> str:
        return humanize.intcomma(int(value))

    def format_json(self, value: Any, field: FieldSpec) -> Any:
        return int(value)


default_output_formatter = OutputFormatter()
float_output_formatter = FloatOutputFormatter()
complex_output_formatter = ComplexOutputFormatter()
bool_output_formatter = BoolOutputFormatter()
duration_output_formatter = DurationOutputFormatter()
count_output_formatter = CountOutputFormatter()
