"""
Pytest configuration for tests.

Shared fields, seeded generators and the built-in triangular algebras.
"""

import random

import pytest

from fatdual.bimod import BimoduleElement, TriangularAlgebra
from fatdual.catalog import resolve_algebra
from fatdual.exactalg import GroundField


@pytest.fixture
def qq():
    """The rationals."""
    return GroundField.rationals()


@pytest.fixture
def gf5():
    """A small prime field."""
    return GroundField.prime(5)


@pytest.fixture
def rng():
    """A generator with a fixed seed, fresh for every test."""
    return random.Random(20080101)


@pytest.fixture
def t2(qq):
    """The 2-block triangular algebra (arrow 0 -> 1) split at its sink 1."""
    return TriangularAlgebra.from_basic(resolve_algebra("t2", qq))


@pytest.fixture
def t3(qq):
    return TriangularAlgebra.from_basic(resolve_algebra("t3", qq))


@pytest.fixture
def kronecker_algebra(qq):
    """The Kronecker algebra split at its sink 1; W is two-dimensional."""
    return TriangularAlgebra.from_basic(resolve_algebra("kronecker", qq))


@pytest.fixture
def a2tilde_algebra(qq):
    return TriangularAlgebra.from_basic(resolve_algebra("a2tilde", qq))


def _element(algebra: TriangularAlgebra, p1: int, p2: list[int], rows: list[list[int | str]]) -> BimoduleElement:
    field = algebra.field
    data = [[field.parse(x) for x in row] for row in rows]
    return BimoduleElement(algebra=algebra, p1=p1, p2=p2, data=data)


@pytest.fixture
def make_element():
    """Build an element from integer or "num/den" entries."""
    return _element
