"""Shared fixtures for the cdiff_toolkit test suite"""
import os

import numpy as np
import pytest

from cdiff_toolkit.config import get_config
from cdiff_toolkit.field_function import from_lut, from_monomial
from cdiff_toolkit.finite_field import build_field


def pytest_collection_modifyitems(config, items):
    if os.environ.get('CDIFF_RUN_SLOW') == '1':
        return
    skip_slow = pytest.mark.skip(reason="set CDIFF_RUN_SLOW=1 to run")
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def fresh_config():
    """Every test starts from the default configuration"""
    get_config().reset_to_defaults()
    yield get_config()
    get_config().reset_to_defaults()


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def gf8():
    return build_field(2, 3)


@pytest.fixture
def gf9():
    return build_field(3, 2)


@pytest.fixture
def gf16():
    return build_field(2, 4)


@pytest.fixture
def gf27():
    return build_field(3, 3)


@pytest.fixture
def inverse16(gf16):
    return from_monomial(gf16, 14)


def random_function(field, rng):
    return from_lut(field, rng.integers(0, field.order, field.order))


@pytest.fixture
def random_lut(rng):
    """Factory for seeded random lookup-table functions"""
    return lambda field: random_function(field, rng)
