import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import config  # noqa: E402
import data  # noqa: E402
from analysis import g_fields  # noqa: E402


@pytest.fixture(autouse=True)
def memory_cache_only(monkeypatch):
    monkeypatch.setattr(config, 'CACHE_DIR', None)
    yield


@pytest.fixture
def fixture_germ():
    def load(name, order=None):
        gf = data.load_fixture(name).germ
        if order is not None:
            gf = data.GermFile(gf.n, gf.p, order, gf.components, gf.exact_germ, gf.name)
        return gf.to_germ()
    return load


@pytest.fixture
def fresh_slices():
    g_fields.clear_cache()
    yield
    g_fields.clear_cache()
