import glob
import json
import logging
import os
from dataclasses import dataclass, field
from fractions import Fraction

from lark import Lark, Transformer, Token
from lark.exceptions import LarkError, UnexpectedInput, VisitError

import config
from analysis.jet_algebra import GermJet, JetPoly
from errors import GermlabError, ParseError, UserInputError

log = logging.getLogger(__name__)

# --- POLYNOMIAL GRAMMAR ---
# terms joined by +/-; a term is a *-product of rationals and powers x<i>^<e>;
# y<i> is accepted as an alias of x<i>.
POLY_GRAMMAR = r"""
    poly: signed_term (SIGN term)*
    signed_term: SIGN? term
    term: factor ("*" factor)*
    ?factor: number | power
    number: INT ("/" INT)?
    power: VAR ("^" INT)?
    SIGN: "+" | "-"
    VAR: /[xy][0-9]+/

    %import common.INT
    %import common.WS
    %ignore WS
"""

poly_parser = Lark(POLY_GRAMMAR, start='poly', parser='lalr')


class _JetTransformer(Transformer):

    def __init__(self, n, order):
        super().__init__()
        self.n = n
        self.order = order

    def number(self, items):
        value = Fraction(int(items[0]))
        if len(items) == 2:
            den = int(items[1])
            if den == 0:
                raise ParseError("division by zero in coefficient", items[1].line, items[1].column)
            value /= den
        return value

    def power(self, items):
        var = items[0]
        index = int(var[1:])
        if not 1 <= index <= self.n:
            raise ParseError(f"variable {var} outside {self.prefix_range()}", var.line, var.column)
        exp = 1
        if len(items) == 2:
            exp = int(items[1])
            if exp < 1:
                raise ParseError(f"exponent of {var} must be at least 1", items[1].line, items[1].column)
        mono = [0] * self.n
        mono[index - 1] = exp
        return tuple(mono)

    def prefix_range(self):
        return f"x1..x{self.n}"

    def term(self, items):
        coef = Fraction(1)
        mono = [0] * self.n
        for item in items:
            if isinstance(item, tuple):
                mono = [a + b for a, b in zip(mono, item)]
            else:
                coef *= item
        return (tuple(mono), coef)

    def signed_term(self, items):
        if len(items) == 2:
            mono, coef = items[1]
            return (mono, -coef if items[0] == '-' else coef)
        return items[0]

    def poly(self, items):
        terms = [items[0]]
        rest = items[1:]
        for sign, (mono, coef) in zip(rest[::2], rest[1::2]):
            terms.append((mono, -coef if sign == '-' else coef))
        dropped = [m for m, c in terms if sum(m) > self.order and c]
        if dropped:
            log.debug(f"dropped {len(dropped)} term(s) above jet order {self.order}")
        return JetPoly(self.n, self.order, tuple(terms))


def parse_poly(text, n, order):
    """Parse the polynomial grammar into a JetPoly in n variables at the given order."""
    try:
        tree = poly_parser.parse(text)
        return _JetTransformer(n, order).transform(tree)
    except VisitError as v:
        if isinstance(v.orig_exc, GermlabError):
            raise v.orig_exc from v
        raise ParseError(f"cannot read polynomial '{text}': {v.orig_exc}") from v
    except UnexpectedInput as e:
        raise ParseError(f"cannot read polynomial '{text}'", e.line, e.column) from e
    except LarkError as e:
        raise ParseError(f"cannot read polynomial '{text}': {e}") from e


# --- GERM FILES ---

@dataclass(frozen=True)
class GermFile:
    n: int
    p: int
    order: int
    components: tuple
    exact_germ: bool = False
    name: str = ''

    def to_germ(self):
        jets = []
        for i, text in enumerate(self.components):
            try:
                jets.append(parse_poly(text, self.n, self.order))
            except ParseError as e:
                raise ParseError(f"component {i + 1} of {self.name or 'germ'}: {e.message}", e.line, e.column) from e
        return GermJet(tuple(jets))

    def to_payload(self):
        return {
            'n': self.n, 'p': self.p, 'order': self.order,
            'components': list(self.components), 'exact_germ': self.exact_germ,
        }


@dataclass(frozen=True)
class Fixture:
    name: str
    germ: GermFile
    provenance: str = ''
    tags: tuple = field(default_factory=tuple)


def germ_file_from_dict(raw, name=''):
    try:
        components = tuple(str(c) for c in raw['components'])
        n = int(raw['n'])
        order = int(raw['order'])
    except (KeyError, TypeError, ValueError) as e:
        raise UserInputError(f"germ file {name or ''} needs n, order and components ({e})") from e
    p = int(raw.get('p', len(components)))
    if p != len(components):
        raise UserInputError(f"germ file {name} declares p={p} but lists {len(components)} components")
    return GermFile(n, p, order, components, bool(raw.get('exact_germ', False)), name)


def load_germ_file(path):
    if not os.path.exists(path):
        raise UserInputError(f"germ file not found: {path}")
    with open(path, 'r') as f:
        try:
            raw = json.load(f)
        except json.JSONDecodeError as e:
            raise ParseError(f"germ file {path} is not valid JSON: {e.msg}", e.lineno, e.colno) from e
    name = raw.get('name') or os.path.splitext(os.path.basename(path))[0]
    return germ_file_from_dict(raw, name)


def germ_from_spec(spec):
    """A path to a germ file, or a fixture name (with or without .json)."""
    if os.path.exists(spec):
        return load_germ_file(spec)
    name = os.path.splitext(os.path.basename(spec))[0]
    try:
        return load_fixture(name).germ
    except UserInputError:
        raise UserInputError(f"'{spec}' is neither a germ file nor a fixture name") from None


# --- FIXTURES ---

def _fixture_from_dict(raw, name):
    germ = germ_file_from_dict(raw, name)
    return Fixture(name, germ, raw.get('provenance', ''), tuple(raw.get('tags', ())))


def load_fixture(name):
    path = os.path.join(config.FIXTURES_DIR, f"{name}.json")
    if not os.path.exists(path):
        raise UserInputError(f"no fixture named '{name}'")
    with open(path, 'r') as f:
        return _fixture_from_dict(json.load(f), name)


def load_fixtures(n=None, p=None, tag=None):
    """All shipped fixtures, sorted by name, optionally filtered."""
    out = []
    for path in sorted(glob.glob(os.path.join(config.FIXTURES_DIR, '*.json'))):
        name = os.path.splitext(os.path.basename(path))[0]
        with open(path, 'r') as f:
            fx = _fixture_from_dict(json.load(f), name)
        if n is not None and fx.germ.n != n:
            continue
        if p is not None and fx.germ.p != p:
            continue
        if tag is not None and tag not in fx.tags:
            continue
        out.append(fx)
    return out


def write_json(path, payload):
    os.makedirs(os.path.dirname(path) or '.', exist_ok=True)
    with open(path, 'w') as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write('\n')


# --- θ[G] SLICE CACHE ---

def _slice_path(group_spec, d):
    safe = group_spec.replace(':', '_').replace(',', '-')
    return os.path.join(config.CACHE_DIR, f"theta_{safe}_deg{d}.json")


def load_field_slice(group_spec, d):
    """Cached basis rows of a θ[G] slice, or None."""
    if not config.CACHE_DIR:
        return None
    path = _slice_path(group_spec, d)
    if not os.path.exists(path):
        return None
    try:
        with open(path, 'r') as f:
            raw = json.load(f)
        return [[Fraction(v) for v in row] for row in raw['basis']]
    except (OSError, ValueError, KeyError) as e:
        log.warning(f"ignoring unreadable cache file {path}: {e}")
        return None


def save_field_slice(group_spec, d, rows):
    if not config.CACHE_DIR:
        return
    payload = {'group': group_spec, 'degree': d, 'basis': [[str(v) for v in row] for row in rows]}
    try:
        write_json(_slice_path(group_spec, d), payload)
    except OSError as e:
        log.warning(f"could not write θ[G] cache for {group_spec} degree {d}: {e}")
