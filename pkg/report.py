"""Report emission: sorted-key JSON for machines, pandas tables for people."""
import json
import sys
from enum import Enum
from fractions import Fraction

import numpy as np
import pandas as pd

from analysis.lie_catalog import GroupId

WIDTH = 80


def to_jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, GroupId):
        return obj.spec
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return round(float(obj), 12)
    if obj is None or isinstance(obj, str):
        return obj
    return str(obj)


def dumps_json(payload):
    return json.dumps(to_jsonable(payload), sort_keys=True, indent=2, ensure_ascii=False)


def _is_row_list(value):
    return isinstance(value, list) and value and all(isinstance(v, dict) for v in value)


def _cell(value):
    if isinstance(value, (dict, list)):
        return json.dumps(value, sort_keys=True, ensure_ascii=False)
    return value


def format_table(payload, title=None):
    """Scalars as 'key: value' lines, lists of dicts as DataFrames, nested maps flattened one level."""
    data = to_jsonable(payload)
    lines = ["=" * WIDTH]
    if title:
        lines.append(title.upper())
        lines.append("-" * WIDTH)
    if _is_row_list(data):
        data = {'rows': data}
    tables = []
    for key in sorted(data):
        value = data[key]
        if _is_row_list(value):
            tables.append((key, value))
        elif isinstance(value, dict) and value and not any(isinstance(v, (dict, list)) for v in value.values()):
            for sub in sorted(value):
                lines.append(f"{key}.{sub}: {value[sub]}")
        else:
            lines.append(f"{key}: {_cell(value)}")
    for key, rows in tables:
        df = pd.DataFrame([{k: _cell(v) for k, v in row.items()} for row in rows])
        lines.append("-" * WIDTH)
        lines.append(f"{key} ({len(rows)})")
        lines.append(df.to_string(index=False))
    lines.append("=" * WIDTH)
    return "\n".join(lines)


def emit(payload, fmt='json', title=None, stream=None):
    stream = stream or sys.stdout
    text = dumps_json(payload) if fmt == 'json' else format_table(payload, title)
    stream.write(text + "\n")
    return text
