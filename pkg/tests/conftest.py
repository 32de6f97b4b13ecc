import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.root_data import make_descriptor  # noqa: E402


@pytest.fixture
def b1():
    """B1(m₊=1, m₋=0)"""
    return make_descriptor('B', 1, m_plus=1, m_minus=0)


@pytest.fixture
def b2():
    return make_descriptor('B', 2, m_plus=1, m_minus=0)


@pytest.fixture
def gl2():
    return make_descriptor('A', 2)


@pytest.fixture
def half():
    return Fraction(1, 2)
