import json
from enum import Enum
from fractions import Fraction

import numpy as np

import report
from analysis.lie_catalog import parse_group_spec


class Color(str, Enum):
    RED = 'red'


def test_to_jsonable_conversions():
    payload = {
        'frac': Fraction(1, 2), 'enum': Color.RED, 'group': parse_group_spec('so:3'),
        'float': np.float64(0.1 + 0.2), 'int': np.int64(3), 'flag': np.bool_(True),
        'array': np.array([1.0, 2.0]), 2: 'int key',
    }
    out = report.to_jsonable(payload)
    assert out['frac'] == '1/2'
    assert out['enum'] == 'red'
    assert out['group'] == 'so:3'
    assert out['float'] == 0.3
    assert out['int'] == 3 and out['flag'] is True
    assert out['array'] == [1.0, 2.0]
    assert out['2'] == 'int key'


def test_dumps_json_is_sorted_and_stable():
    text = report.dumps_json({'b': 1, 'a': Fraction(2, 3)})
    assert text.index('"a"') < text.index('"b"')
    assert json.loads(text) == {'a': '2/3', 'b': 1}
    assert report.dumps_json({'a': Fraction(2, 3), 'b': 1}) == text


def test_table_layout():
    payload = {'suite': 'dims', 'dims': {'1': 3, '2': 0},
               'rows': [{'id': 1, 'passed': True}, {'id': 2, 'passed': False}]}
    text = report.format_table(payload, title='reproduce')
    lines = text.splitlines()
    assert lines[0] == '=' * report.WIDTH
    assert lines[1] == 'REPRODUCE'
    assert 'dims.1: 3' in lines
    assert 'suite: dims' in lines
    assert 'rows (2)' in lines
    assert any('passed' in line and 'id' in line for line in lines)


def test_emit_writes_to_stream(capsys):
    text = report.emit({'k': 4})
    assert capsys.readouterr().out == text + '\n'
