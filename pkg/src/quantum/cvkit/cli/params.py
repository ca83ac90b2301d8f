import json
import pathlib
from typing import (
    Any,
    Optional,
)

import click
import numpy as np

from ..codec import decode_complex, decode_matrix, decode_vector


def _load_text(value: str) -> str:
    """``@path`` reads the JSON document from a file."""
    if value.startswith('@'):
        return pathlib.Path(value[1:]).read_text(encoding='utf-8')
    return value


class JSONParamType(click.ParamType):
    """
    A JSON string parameter type, or ``@path`` to a JSON file.
    The default value must be given as a valid JSON-parsable string,
    not the Python objects.
    """

    name = "json-string"

    def convert(
        self,
        value: Any,
        param: Optional[click.Parameter],
        ctx: Optional[click.Context],
    ) -> Any:
        if value is None or not isinstance(value, str):
            return value
        try:
            return json.loads(_load_text(value))
        except (json.JSONDecodeError, OSError) as e:
            self.fail(f"cannot parse {value!r} as JSON ({e})", param, ctx)


class MatrixParamType(JSONParamType):
    """A complex matrix as rows of ``[re, im]`` pairs (or plain numbers)."""

    name = "matrix"

    def convert(self, value, param, ctx):
        if isinstance(value, np.ndarray):
            return value
        data = super().convert(value, param, ctx)
        try:
            return decode_matrix(data)
        except Exception as e:
            self.fail(f"not a matrix: {e}", param, ctx)


class VectorParamType(JSONParamType):

    name = "vector"

    def convert(self, value, param, ctx):
        if isinstance(value, np.ndarray):
            return value
        data = super().convert(value, param, ctx)
        try:
            return decode_vector(data)
        except Exception as e:
            self.fail(f"not a complex vector: {e}", param, ctx)


class ComplexParamType(click.ParamType):
    """Accepts ``1.5``, ``0.3-0.2j`` or ``[0.3, -0.2]``."""

    name = "complex"

    def convert(self, value, param, ctx):
        if isinstance(value, complex):
            return value
        text = str(value).strip()
        try:
            if text.startswith('['):
                return decode_complex(json.loads(text))
            return complex(text.replace(' ', ''))
        except (ValueError, json.JSONDecodeError):
            self.fail(f"{value!r} is not a complex number", param, ctx)


class OccupationParamType(click.ParamType):
    """A photon-number tuple such as ``1,1,0``."""

    name = "occupation"

    def convert(self, value, param, ctx):
        if isinstance(value, tuple):
            return value
        try:
            occ = tuple(int(v) for v in str(value).split(',') if v.strip() != '')
        except ValueError:
            self.fail(f"{value!r} is not a comma-separated list of integers", param, ctx)
        if any(n < 0 for n in occ):
            self.fail(f"{value!r} has negative photon numbers", param, ctx)
        return occ


class CommaSeparatedListType(click.ParamType):

    name = 'List Expression'

    def __init__(self, item_type: type = str) -> None:
        self._item_type = item_type

    def convert(self, arg, param, ctx):
        if isinstance(arg, (list, tuple)):
            return list(arg)
        try:
            return [self._item_type(v) for v in str(arg).split(',') if v.strip() != '']
        except ValueError as e:
            self.fail(repr(e), param, ctx)


class RangeParamType(click.ParamType):
    """``start:stop:step`` (stop inclusive) or a comma-separated list."""

    name = "range"

    def convert(self, value, param, ctx):
        if isinstance(value, (list, tuple)):
            return list(value)
        text = str(value)
        try:
            if ':' in text:
                start, stop, step = (float(v) for v in text.split(':'))
                if step <= 0:
                    self.fail("step must be positive", param, ctx)
                count = int(np.floor((stop - start) / step + 1e-9)) + 1
                return [start + i * step for i in range(max(count, 0))]
            return [float(v) for v in text.split(',') if v.strip() != '']
        except ValueError as e:
            self.fail(repr(e), param, ctx)


json_param = JSONParamType()
matrix_param = MatrixParamType()
vector_param = VectorParamType()
complex_param = ComplexParamType()
occupation_param = OccupationParamType()
float_list = CommaSeparatedListType(float)
int_list = CommaSeparatedListType(int)
range_param = RangeParamType()
