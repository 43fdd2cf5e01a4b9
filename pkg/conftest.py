"""
Общие фикстуры: четырехугольник из примера, единичный квадрат, симплексы,
псевдослучайные многогранники с фиксированным зерном
"""
from typing import List

import numpy as np
import pytest

from config import Config
from errors import DegeneratePolytopeError
from polytope import Polytope, hull_from_vertices

QUAD_VERTICES = [(0, 0), (2, 0), (1, 2), (0, 1)]
T1_VERTICES = [(0, 0), (2, 0), (0, 1)]
T2_VERTICES = [(2, 0), (1, 2), (0, 1)]

# Случайные многогранники строятся не более чем из MAX_POINTS точек в любой размерности
MAX_POINTS = 10


def unit_simplex(dim: int) -> Polytope:
    points = [tuple(0 for _ in range(dim))]
    points += [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
    return hull_from_vertices(dim, points)


def random_polytope(rng: np.random.Generator, dim: int, npoints: int) -> Polytope:
    """Оболочка случайных целых точек в [-4, 4]^d (повтор при вырождении)"""
    while True:
        points = [tuple(int(c) for c in rng.integers(-4, 5, size=dim)) for _ in range(npoints)]
        try:
            return hull_from_vertices(dim, points)
        except DegeneratePolytopeError:
            continue


def random_polytopes(count_per_dim: int, seed: int = Config.SEED) -> List[Polytope]:
    rng = np.random.default_rng(seed)
    result = []
    for dim in (2, 3, 4):
        for _ in range(count_per_dim):
            npoints = int(rng.integers(dim + 1, MAX_POINTS + 1))
            result.append(random_polytope(rng, dim, npoints))
    return result


@pytest.fixture
def quad() -> Polytope:
    return hull_from_vertices(2, QUAD_VERTICES)


@pytest.fixture
def t1() -> Polytope:
    return hull_from_vertices(2, T1_VERTICES)


@pytest.fixture
def t2() -> Polytope:
    return hull_from_vertices(2, T2_VERTICES)


@pytest.fixture
def unit_square() -> Polytope:
    return hull_from_vertices(2, [(0, 0), (1, 0), (1, 1), (0, 1)])


@pytest.fixture
def unit_triangle() -> Polytope:
    return unit_simplex(2)


@pytest.fixture
def unit_interval() -> Polytope:
    return hull_from_vertices(1, [(0,), (1,)])


@pytest.fixture(scope="session")
def property_polytopes() -> List[Polytope]:
    """30 многогранников: по 10 в размерностях 2, 3, 4"""
    return random_polytopes(10)
