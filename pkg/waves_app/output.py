"""
Deterministic CSV and JSON writers.

CSV files start with one ``# key=value`` line per metadata entry followed by
a header row; floats use 17 significant digits and missing values are empty
fields. JSON keeps insertion order and never contains NaN.
"""
import enum
import math
import os
from dataclasses import dataclass, field

import pandas as pd
from rest_framework.renderers import JSONRenderer

from .conf import wave_settings


@dataclass
class Table:
    columns: list
    rows: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def append(self, *values):
        self.rows.append(values)

    def records(self):
        return [dict(zip(self.columns, row)) for row in self.rows]


def plain(value):
    """JSON-safe version of a value: enums by value, non-finite floats as None."""
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, complex):
        return [plain(value.real), plain(value.imag)]
    if isinstance(value, float):
        return value if math.isfinite(value) else None
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if hasattr(value, 'item') and callable(value.item):
        return plain(value.item())
    return value


def format_scalar(value):
    value = plain(value)
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return wave_settings.FLOAT_FORMAT % value
    if isinstance(value, list):
        return '[' + ','.join(format_scalar(v) for v in value) + ']'
    return str(value)


def _flatten(metadata, prefix=''):
    for key, value in metadata.items():
        name = '%s.%s' % (prefix, key) if prefix else str(key)
        if isinstance(value, dict):
            yield from _flatten(value, name)
        else:
            yield name, value


def render_csv(table):
    header = ''.join('# %s=%s\n' % (k, format_scalar(v)) for k, v in _flatten(table.metadata))
    rows = [[plain(v) for v in row] for row in table.rows]
    frame = pd.DataFrame.from_records(rows, columns=list(table.columns))
    body = frame.to_csv(index=False, float_format=wave_settings.FLOAT_FORMAT,
                        na_rep='', lineterminator='\n')
    return header + body


def render_json(payload):
    data = JSONRenderer().render(plain(payload), renderer_context={'indent': 2})
    return data.decode('utf-8') + '\n'


def table_payload(table):
    return {'metadata': table.metadata, 'columns': list(table.columns),
            'rows': [list(row) for row in table.rows]}


def render(table, fmt):
    if fmt == 'json':
        return render_json(table_payload(table))
    return render_csv(table)


def write_text(path, text):
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='\n') as fh:
        fh.write(text)
    return path
