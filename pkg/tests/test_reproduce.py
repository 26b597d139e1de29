import random

import pytest

from analysis import reproduce as rp
from analysis.tangent_spaces import IDENTITY_COMPONENT_NOTE
from errors import UserInputError

ROW_KEYS = {'id', 'criterion', 'expected', 'measured', 'passed', 'provenance'}


@pytest.mark.parametrize("check", [
    rp.check_so_dims, rp.check_sl2_dims, rp.check_ring_dims, rp.check_linear_only,
    rp.check_cusp_codim, rp.check_growth, rp.check_frontal, rp.check_monge,
], ids=lambda c: c.__name__)
def test_quick_checks_pass(check):
    row = rp.run_check(check, random.Random(7), quick=True)
    assert set(row) == ROW_KEYS
    assert row['passed'], row['measured']


def test_failing_check_becomes_row():
    def check_explodes(rng, quick=False):
        raise UserInputError("boom")
    row = rp.run_check(check_explodes, random.Random(0))
    assert row['passed'] is False
    assert 'boom' in row['measured']
    assert row['criterion'] == 'explodes'


def test_unknown_suite():
    with pytest.raises(UserInputError):
        rp.reproduce('nope')


def test_suite_names():
    assert rp.suite_names() == ['dims', 'geometry', 'moduli', 'all']


def test_report_payload(monkeypatch):
    monkeypatch.setitem(rp.SUITES, 'dims', (rp.check_so_dims, rp.check_ring_dims))
    report = rp.reproduce('dims', quick=True)
    payload = report.to_payload()
    assert payload['passed']
    assert payload['summary'] == '2/2 criteria passed'
    assert [row['id'] for row in payload['rows']] == [1, 4]
    assert rp.OVER_C_NOTE not in payload['notes']
    assert IDENTITY_COMPONENT_NOTE in payload['notes']
