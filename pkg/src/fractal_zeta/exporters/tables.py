'''
Encoders for result tables.

Rows are dicts; the column order is that of the first row unless given. Floats are written with 17 significant digits
so that identical runs give identical bytes.
'''
from __future__ import annotations

import csv
import io
import json
import math
from collections.abc import Mapping, Sequence
from enum import Enum
from typing import Any

import numpy as np

from ..values import complex_record

__all__ = (
    'FormatType',
    'encode_json',
    'encode_table',
    'format_cell',
    'jsonable',
)


class FormatType(Enum):
    Csv = 'csv'
    Json = 'json'

    def __str__(self) -> str:
        return str(self.value)


def _float(x: float) -> str:
    if math.isnan(x):
        return 'nan'
    if math.isinf(x):
        return 'inf' if x > 0 else '-inf'
    return format(x, '.17g')


def format_cell(value: Any) -> str:  # noqa: PLR0911
    '''
    One CSV cell.

    >>> format_cell(0.1)
    '0.10000000000000001'
    >>> format_cell(1 - 2j)
    '1-2j'
    >>> format_cell(3 + 0j)
    '3'
    >>> format_cell(None), format_cell(True), format_cell([1.5, 2])
    ('', 'true', '1.5;2')
    '''
    match value:
        case None:
            return ''
        case bool() | np.bool_():
            return 'true' if value else 'false'
        case int() | np.integer():
            return str(int(value))
        case float() | np.floating():
            return _float(float(value))
        case complex() | np.complexfloating():
            z = complex(value)
            if z.imag == 0:
                return _float(z.real)
            return f'{_float(z.real)}{"+" if z.imag >= 0 else "-"}{_float(abs(z.imag))}j'
        case list() | tuple():
            return ';'.join(format_cell(v) for v in value)
        case _:
            return str(value)


def jsonable(value: Any) -> Any:
    '''
    Convert numpy scalars, complex numbers and enums to plain JSON values.

    >>> jsonable({'s': 2 + 0j, 'n': np.int64(3), 'z': [1j]})
    {'s': 2.0, 'n': 3, 'z': [[0.0, 1.0]]}
    '''
    match value:
        case Mapping():
            return {str(k): jsonable(v) for k, v in value.items()}
        case list() | tuple() | np.ndarray():
            return [jsonable(v) for v in value]
        case bool() | np.bool_():
            return bool(value)
        case int() | np.integer():
            return int(value)
        case float() | np.floating():
            return float(value)
        case complex() | np.complexfloating():
            return complex_record(complex(value))
        case Enum():
            return str(value)
        case _:
            return value


def encode_json(data: Any) -> str:
    return json.dumps(jsonable(data), indent=2) + '\n'


def encode_table(rows: Sequence[Mapping[str, Any]], fmt: FormatType, columns: Sequence[str] | None = None) -> str:
    '''
    Encode rows as CSV or as a JSON list.

    >>> print(encode_table([{'s': 2, 'value': 0.25}], FormatType.Csv), end='')
    s,value
    2,0.25
    '''
    if columns is None:
        columns = list(rows[0]) if rows else []

    match fmt:
        case FormatType.Json:
            return encode_json([{column: row.get(column) for column in columns} for row in rows])
        case FormatType.Csv:
            buffer = io.StringIO()
            writer = csv.writer(buffer, lineterminator='\n')
            writer.writerow(columns)
            writer.writerows([format_cell(row.get(column)) for column in columns] for row in rows)
            return buffer.getvalue()
