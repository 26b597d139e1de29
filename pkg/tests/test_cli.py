import json

import pytest

import main
from errors import InvariantViolation


def run_json(capsys, argv):
    code = main.run(argv)
    captured = capsys.readouterr()
    return code, (json.loads(captured.out) if code == 0 else None), captured.err


def test_gfields_so3(capsys):
    code, out, _ = run_json(capsys, ['gfields', '--group', 'so:3', '--jet-order', '4'])
    assert code == 0
    assert out['total_dim'] == 3
    assert out['dims_by_degree'] == {'1': 3, '2': 0, '3': 0, '4': 0}


def test_gfields_closed_form_and_ring(capsys):
    code, out, _ = run_json(capsys, ['gfields', '--group', 'SL(2)', '--jet-order', '3',
                                     '--closed-form', '--ring'])
    assert code == 0
    assert out['closed_form_equal'] is True
    assert out['ring']['dim'] == 1


def test_output_is_byte_identical(capsys):
    argv = ['tangent', '--germ', 'cusp', '--group', 'gl:2', '--jet-order', '4', '--extended']
    assert main.run(argv) == 0
    first = capsys.readouterr().out
    assert main.run(argv) == 0
    assert capsys.readouterr().out == first
    assert json.loads(first)['codim_k'] == 1


def test_moduli_on_cusp(capsys):
    code, out, _ = run_json(capsys, ['moduli', '--germ', 'cusp.json', '--pair', 'ag-vs-rxg',
                                     '--group', 'so:2', '--jet-order', '5'])
    assert code == 0
    assert out['dim'] == 0


def test_growth_notes_early_range(capsys):
    code, out, err = run_json(capsys, ['growth', '--germ', 'cusp', '--group', 'so:2',
                                       '--k-min', '2', '--k-max', '6'])
    assert code == 0
    assert [row['codim'] for row in out['codims']] == [1, 1, 2, 3, 4]
    assert out['strictly_increasing'] is False
    assert 'codimensions compared at orders 1..5' in out['notes']
    assert any(note.startswith('range starts below k=3') for note in out['notes'])
    assert '[WARN] range starts below' in err


def test_ring_command(capsys):
    code, out, _ = run_json(capsys, ['ring', '--group', 'tstar:1,2', '--jet-order', '3'])
    assert code == 0
    assert out['dim'] == 10
    assert '1' in out['basis']


def test_normal_form_and_invariants(capsys):
    code, out, _ = run_json(capsys, ['normal-form', '--germ', 'a2_curve', '--kind', 'ak'])
    assert code == 0
    assert out['k'] == 2
    code, out, _ = run_json(capsys, ['invariants', '--germ', 'a2_curve', '--kind', 'frontal'])
    assert code == 0
    assert out['normal_form']['k'] == 2
    assert 'ell_literature' in out


def test_congruent_self(capsys):
    code, out, _ = run_json(capsys, ['congruent', '--germ-a', 'circle', '--germ-b', 'circle',
                                     '--mode', 'euclidean'])
    assert code == 0
    assert out['match'] is True


def test_table_format(capsys):
    assert main.run(['gfields', '--group', 'so:2', '--format', 'table']) == 0
    out = capsys.readouterr().out
    assert out.startswith('=' * 80)
    assert 'total_dim: 1' in out


@pytest.mark.parametrize("argv", [
    ['gfields', '--group', 'foo:2'],
    ['gfields'],
    ['tangent', '--germ', 'no_such_germ', '--group', 'so:2'],
    ['moduli', '--germ', 'cusp', '--pair', 'rxg-vs-rxh', '--group', 'so:2', '--subgroup', 'dstar:1,1'],
    ['invariants', '--germ', 'cusp', '--kind', 'curvature'],
    ['bogus'],
])
def test_user_errors_exit_one(capsys, argv):
    assert main.run(argv) == 1
    assert '[ERROR]' in capsys.readouterr().err


def test_parse_error_reports_location(capsys, tmp_path):
    path = tmp_path / 'bad.json'
    path.write_text(json.dumps({'n': 1, 'order': 4, 'components': ['x1^2', 'x1 * * x1']}))
    assert main.run(['tangent', '--germ', str(path), '--group', 'so:2']) == 1
    assert 'line 1' in capsys.readouterr().err


def test_invariant_violation_exits_two(capsys, monkeypatch):
    def broken(*args, **kwargs):
        raise InvariantViolation("synthetic")
    monkeypatch.setattr(main.ts, 'moduli', broken)
    code = main.run(['moduli', '--germ', 'cusp', '--pair', 'ag-vs-rxg', '--group', 'so:2'])
    assert code == 2
    assert 'synthetic' in capsys.readouterr().err


def test_inexact_germ_warns(capsys, tmp_path):
    path = tmp_path / 'short.json'
    path.write_text(json.dumps({'n': 1, 'order': 3, 'components': ['x1^2', 'x1^3']}))
    code, out, err = run_json(capsys, ['tangent', '--germ', str(path), '--group', 'so:2', '--jet-order', '3'])
    assert code == 0
    assert '[WARN]' in err
    assert any('3-determined' in note for note in out['notes'])


def test_help_exits_zero(capsys):
    assert main.run(['--help']) == 0
    assert 'germlab' in capsys.readouterr().out
