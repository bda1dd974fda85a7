from itertools import product

import pytest

from polysum.polytope import VPolytope

ACCEPTANCE_LINES = []


def square():
    return VPolytope(product((-1, 1), repeat=2), name="square")


def unit_square():
    return VPolytope(product((0, 1), repeat=2), name="unit_square")


def diamond():
    return VPolytope([(2, 0), (-2, 0), (0, 2), (0, -2)], name="diamond")


def cube():
    return VPolytope(product((-1, 1), repeat=3), name="cube")


def octahedron():
    return VPolytope([(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)],
                     name="octahedron")


def triangle():
    return VPolytope([(2, 0), (-1, 2), (-1, -2)], name="triangle")


def hseg():
    return VPolytope([(0, 0), (1, 0)], name="hseg")


def vseg():
    return VPolytope([(0, 0), (0, 1)], name="vseg")


def dseg():
    return VPolytope([(0, 0), (1, 1)], name="dseg")


@pytest.fixture
def shapes():
    return {f.__name__: f() for f in (square, unit_square, diamond, cube, octahedron, triangle,
                                      hseg, vseg, dseg)}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
