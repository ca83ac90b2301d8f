"""
JSON encoding of the toolkit's values.  Complex numbers are always
``[re, im]`` pairs and matrices are row-major lists of such pairs.
"""

from __future__ import annotations

import enum
import hashlib
import json
import pathlib
from typing import (
    Any,
    Dict,
    List,
    Mapping,
    Sequence,
    Union,
)

import attr
import numpy as np

from .exceptions import ParameterError
from .gaussian import Displace, Element, GaussianState, Passive, Squeeze
from .types import ConfidenceValue, CoreState, FockVector, SampleBatch

__all__ = (
    'encode_complex',
    'decode_complex',
    'encode_matrix',
    'decode_matrix',
    'encode_vector',
    'decode_vector',
    'encode_fock',
    'decode_fock',
    'encode_gaussian',
    'decode_gaussian',
    'encode_core',
    'decode_core',
    'encode_confidence',
    'encode_samples',
    'decode_samples',
    'decode_elements',
    'load_samples',
    'to_jsonable',
    'dumps',
    'inputs_digest',
)


def encode_complex(value: complex) -> List[float]:
    value = complex(value)
    return [value.real, value.imag]


def decode_complex(value: Any) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, Sequence) and not isinstance(value, str) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise ParameterError('expected a number or an [re, im] pair', value)


def encode_vector(values) -> List[List[float]]:
    return [encode_complex(v) for v in np.asarray(values, dtype=complex).ravel()]


def decode_vector(values: Sequence[Any]) -> np.ndarray:
    return np.array([decode_complex(v) for v in values], dtype=complex)


def encode_matrix(matrix) -> List[List[List[float]]]:
    a = np.asarray(matrix, dtype=complex)
    if a.ndim != 2:
        raise ParameterError('expected a matrix', a.shape)
    return [encode_vector(row) for row in a]


def decode_matrix(rows: Sequence[Sequence[Any]]) -> np.ndarray:
    decoded = [decode_vector(row) for row in rows]
    if decoded and len({row.size for row in decoded}) != 1:
        raise ParameterError('matrix rows differ in length')
    if not decoded:
        return np.zeros((0, 0), dtype=complex)
    return np.vstack(decoded)


def encode_fock(state: FockVector) -> Dict[str, Any]:
    return {
        'modes': state.modes,
        'cutoff': list(state.cutoff),
        'amplitudes': [
            {'occ': list(occ), 're': amp.real, 'im': amp.imag}
            for occ, amp in sorted(state.amplitudes.items())
        ],
    }


def decode_fock(data: Mapping[str, Any]) -> FockVector:
    try:
        amplitudes = {
            tuple(item['occ']): complex(item.get('re', 0.0), item.get('im', 0.0))
            for item in data['amplitudes']
        }
        return FockVector(int(data['modes']), data['cutoff'], amplitudes)
    except (KeyError, TypeError, ValueError) as e:
        raise ParameterError('malformed Fock vector', str(e)) from e


def encode_gaussian(state: GaussianState) -> Dict[str, Any]:
    return {
        'covariance': encode_matrix(state.covariance),
        'displacement': encode_vector(state.displacement),
    }


def decode_gaussian(data: Mapping[str, Any]) -> GaussianState:
    return GaussianState(decode_matrix(data['covariance']), decode_vector(data['displacement']))


def encode_core(core: CoreState) -> Dict[str, Any]:
    return {'coefficients': encode_vector(core.coefficients)}


def decode_core(data: Any) -> CoreState:
    values = data['coefficients'] if isinstance(data, Mapping) else data
    return CoreState(decode_vector(values))


def encode_confidence(value: ConfidenceValue) -> Dict[str, Any]:
    estimate = value.value
    return {
        'value': encode_complex(estimate) if isinstance(estimate, complex) else float(estimate),
        'bound': value.bound,
        'failure': value.failure,
        'clamped': value.clamped,
    }


def encode_samples(batch: SampleBatch) -> Dict[str, Any]:
    data = batch.as_matrix()
    if np.iscomplexobj(data):
        rows = [encode_vector(row) for row in data]
    else:
        rows = data.tolist()
    return {'seed': batch.seed, 'metadata': to_jsonable(dict(batch.metadata)), 'samples': rows}


def decode_samples(data: Mapping[str, Any]) -> SampleBatch:
    rows = data['samples']
    if rows and isinstance(rows[0][0], Sequence):
        samples = decode_matrix(rows)
    else:
        samples = np.asarray(rows)
    return SampleBatch(samples, data.get('seed'), dict(data.get('metadata') or {}))


_ELEMENT_KINDS = {
    'squeeze': lambda v: Squeeze(decode_vector(v) if isinstance(v, list) else decode_complex(v)),
    'passive': lambda v: Passive(decode_matrix(v)),
    'displace': lambda v: Displace(decode_vector(v) if isinstance(v, list) else decode_complex(v)),
}


def decode_elements(items: Sequence[Mapping[str, Any]]) -> List[Element]:
    """
    Decodes ``[{"squeeze": ξ}, {"passive": U}, {"displace": α}, …]``,
    applied left to right.
    """
    elements = []
    for item in items:
        if not isinstance(item, Mapping) or len(item) != 1:
            raise ParameterError('each element needs exactly one kind', item)
        (kind, value), = item.items()
        try:
            elements.append(_ELEMENT_KINDS[kind](value))
        except KeyError:
            raise ParameterError('unknown element kind', kind) from None
    return elements


def load_samples(path: Union[str, pathlib.Path]) -> SampleBatch:
    """
    Reads heterodyne samples written by ``het-sample``: either the JSON
    sample document or a CSV table with ``<name>_re``/``<name>_im`` column
    pairs.  A ``<path>.json`` sidecar next to a CSV file supplies the seed
    and metadata.
    """
    path = pathlib.Path(path)
    text = path.read_text(encoding='utf-8')
    if path.suffix == '.json' or text.lstrip().startswith('{'):
        data = json.loads(text)
        if 'result' in data and 'samples' not in data:
            result = data['result']
            if isinstance(result, list):
                rows = [decode_vector(list(row.values())) for row in result]
                samples = np.vstack(rows) if rows else np.zeros((0, 0), complex)
                return SampleBatch(samples, data.get('seed'))
            data = result
        return decode_samples(data)
    header = text.splitlines()[0].split(',')
    table = np.loadtxt(path, delimiter=',', skiprows=1, ndmin=2)
    real_cols = [i for i, h in enumerate(header) if h.endswith('_re')]
    if not real_cols:
        raise ParameterError('no complex columns in sample table', str(path))
    imag_cols = [header.index(header[i][:-3] + '_im') for i in real_cols]
    samples = table[:, real_cols] + 1j * table[:, imag_cols]
    seed, metadata = None, {}
    sidecar = path.with_name(path.name + '.json')
    if sidecar.exists():
        meta = json.loads(sidecar.read_text(encoding='utf-8'))
        seed, metadata = meta.get('seed'), dict(meta.get('metadata') or {})
    return SampleBatch(samples, seed, metadata)


def to_jsonable(value: Any) -> Any:
    """Converts records, arrays and complex scalars for the result envelope."""
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, FockVector):
        return encode_fock(value)
    if isinstance(value, GaussianState):
        return encode_gaussian(value)
    if isinstance(value, CoreState):
        return encode_core(value)
    if isinstance(value, ConfidenceValue):
        return encode_confidence(value)
    if isinstance(value, SampleBatch):
        return encode_samples(value)
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, (complex, np.complexfloating)):
        return encode_complex(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, np.ndarray):
        if np.iscomplexobj(value):
            return to_jsonable(value.tolist())
        return value.tolist()
    if attr.has(type(value)):
        return {f.name: to_jsonable(getattr(value, f.name)) for f in attr.fields(type(value))}
    if isinstance(value, Mapping):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        return [to_jsonable(v) for v in value]
    raise TypeError(f'cannot encode {type(value).__name__}')


def dumps(value: Any, **opts: Any) -> str:
    return json.dumps(to_jsonable(value), allow_nan=True, **opts)


def inputs_digest(inputs: Mapping[str, Any]) -> str:
    """SHA-256 of the canonical (sorted-key, compact) JSON of *inputs*."""
    canonical = json.dumps(to_jsonable(inputs), sort_keys=True, separators=(',', ':'))
    return hashlib.sha256(canonical.encode('utf-8')).hexdigest()
