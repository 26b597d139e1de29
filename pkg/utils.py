import random
import unicodedata
from fractions import Fraction

import numpy as np

from analysis.jet_algebra import GermJet, JetPoly, monomial_basis
from analysis.lie_catalog import DISPLAY, GroupId, parse_group_spec, sample_group_element
from errors import UserInputError

# display name (normalized) -> catalog kind, so 'SO(3)' and 'T*_r(1,2)' are accepted too
_DISPLAY_KINDS = {}


def normalize(text):
    """
    Removes accents, spaces, and casing for easy matching.
    """
    if not text: return ""
    text = unicodedata.normalize('NFD', text)
    text = "".join(c for c in text if unicodedata.category(c) != 'Mn')
    return text.lower().replace(" ", "").replace("_", "")


def resolve_group(text):
    """
    Returns the catalog GroupId for either the CLI spec ('tstar:1,2') or the display
    form ('T*_r(1,2)').
    """
    if not text:
        raise UserInputError("empty group spec")
    if ':' in text:
        return parse_group_spec(text)
    if not _DISPLAY_KINDS:
        _DISPLAY_KINDS.update({normalize(name): kind for kind, name in DISPLAY.items()})
    head, sep, tail = text.strip().rpartition('(')
    if not sep or not tail.endswith(')'):
        raise UserInputError(f"group '{text}' must look like so:3 or SO(3)")
    kind = _DISPLAY_KINDS.get(normalize(head))
    if kind is None:
        raise UserInputError(f"unknown group '{head}'")
    return parse_group_spec(f"{kind}:{tail[:-1]}")


def random_fraction(rng, bound=3, dens=(1, 2, 3)):
    return Fraction(rng.randint(-bound, bound), rng.choice(dens))


def random_jet(n, order, rng, min_degree=1, density=0.5, bound=3):
    terms = {}
    for mono in monomial_basis(n, order, min_degree):
        if rng.random() < density:
            terms[mono] = random_fraction(rng, bound)
    return JetPoly.from_dict(n, order, terms)


def random_diffeo_jet(n, order, rng=None):
    """
    Rational source diffeomorphism jet: an invertible linear part from GL(n) plus
    random terms of degree 2..order.
    """
    rng = rng or random.Random(0)
    linear = sample_group_element(GroupId('gl', (n,)), rng)
    comps = []
    for i in range(n):
        lin = {tuple(1 if j == c else 0 for j in range(n)): linear[i, c] for c in range(n)}
        comps.append(JetPoly.from_dict(n, order, lin) + random_jet(n, order, rng, min_degree=2, density=0.3))
    return GermJet(tuple(comps))


def random_series(order, rng, scale=1.0):
    """Float coefficients for a one-variable series of the given order."""
    return np.array([rng.uniform(-scale, scale) for _ in range(order + 1)])
