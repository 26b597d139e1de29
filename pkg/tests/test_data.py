import json
from fractions import Fraction

import pytest

import config
import data
from errors import ParseError, UserInputError


def test_parse_poly_coefficients():
    jet = data.parse_poly("x1^2 - 1/2*x1*x2 + 3", 2, 3)
    assert jet.coefficient((2, 0)) == 1
    assert jet.coefficient((1, 1)) == Fraction(-1, 2)
    assert jet.constant_term == 3


def test_parse_poly_leading_sign_and_alias():
    jet = data.parse_poly("-y2 + 2*y1*y1", 2, 3)
    assert jet.coefficient((0, 1)) == -1
    assert jet.coefficient((2, 0)) == 2


def test_terms_above_order_dropped():
    jet = data.parse_poly("x1^4 + x1", 1, 3)
    assert jet.terms == (((1,), Fraction(1)),)


def test_syntax_error_has_location():
    with pytest.raises(ParseError) as info:
        data.parse_poly("x1 + * x2", 2, 3)
    assert info.value.line == 1
    assert info.value.column is not None


@pytest.mark.parametrize("text", ["x3", "1/0", "x1^0"])
def test_semantic_errors(text):
    with pytest.raises(ParseError):
        data.parse_poly(text, 2, 3)


def test_germ_file_round_trip(tmp_path):
    path = tmp_path / "curve.json"
    path.write_text(json.dumps({"n": 1, "order": 4, "components": ["x1^2", "x1^3"]}))
    gf = data.load_germ_file(str(path))
    assert gf.name == "curve"
    assert gf.p == 2
    assert not gf.exact_germ
    f = gf.to_germ()
    assert f[1].coefficient((3,)) == 1


def test_germ_file_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 1, "order": 4, "components": ["x1 +"]}')
    with pytest.raises(ParseError, match="component 1"):
        data.load_germ_file(str(bad)).to_germ()
    broken = tmp_path / "broken.json"
    broken.write_text('{"n": 1,')
    with pytest.raises(ParseError):
        data.load_germ_file(str(broken))
    with pytest.raises(UserInputError):
        data.germ_file_from_dict({"n": 1, "order": 2, "p": 3, "components": ["x1"]})
    with pytest.raises(UserInputError):
        data.load_germ_file(str(tmp_path / "missing.json"))


def test_constant_term_rejected():
    gf = data.germ_file_from_dict({"n": 1, "order": 3, "components": ["1 + x1"]})
    with pytest.raises(UserInputError):
        gf.to_germ()


def test_fixture_lookup():
    assert data.germ_from_spec("cusp").name == "cusp"
    assert data.germ_from_spec("cusp.json").name == "cusp"
    with pytest.raises(UserInputError):
        data.germ_from_spec("no_such_germ")


def test_fixture_filters():
    names = [fx.name for fx in data.load_fixtures(tag='monge')]
    assert names == ['monge_generic', 'monge_plane', 'monge_saddle']
    assert all(fx.germ.n == 1 for fx in data.load_fixtures(n=1))


@pytest.mark.parametrize("fixture", data.load_fixtures(), ids=lambda fx: fx.name)
def test_every_fixture_parses(fixture):
    f = fixture.germ.to_germ()
    assert fixture.germ.exact_germ
    assert (f.n, f.p, f.order) == (fixture.germ.n, fixture.germ.p, fixture.germ.order)


def test_slice_cache_round_trip(tmp_path, monkeypatch):
    monkeypatch.setattr(config, 'CACHE_DIR', str(tmp_path))
    rows = [[Fraction(1, 2), Fraction(0)], [Fraction(0), Fraction(-3)]]
    data.save_field_slice('dstar:1,1', 2, rows)
    assert data.load_field_slice('dstar:1,1', 2) == rows
    assert data.load_field_slice('dstar:1,1', 3) is None


def test_unreadable_cache_is_ignored(tmp_path, monkeypatch):
    monkeypatch.setattr(config, 'CACHE_DIR', str(tmp_path))
    (tmp_path / 'theta_so_2_deg1.json').write_text('not json')
    assert data.load_field_slice('so:2', 1) is None
