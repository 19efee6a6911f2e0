from fractions import Fraction

import pytest

from polydiam.hrep import HPolyhedron


def F(*values):
    return tuple(Fraction(v) for v in values)


@pytest.fixture
def unit_square():
    return HPolyhedron.from_rows([[1, 0], [-1, 0], [0, 1], [0, -1]], [1, 0, 1, 0])


@pytest.fixture
def square_pyramid():
    # base [-1, 1]^2 at z = 0, apex (0, 0, 1)
    return HPolyhedron.from_rows(
        [[0, 0, -1], [1, 0, 1], [-1, 0, 1], [0, 1, 1], [0, -1, 1]], [0, 1, 1, 1, 1]
    )


@pytest.fixture
def quadrant_cone():
    return HPolyhedron.from_rows([[-1, 0], [0, -1]], [0, 0])
