from pathlib import Path

import numpy as np
import pytest

from daqubo import QuboModel
from daqubo.problems import QapInstance, QcppInstance, SelColInstance

FIXTURES = Path(__file__).parent / "fixtures"

# 1-based labels: outer square 1-2-3-4, inner square 5-6-7-8, spokes i -- i+4
TWO_SQUARES_EDGES_1BASED = [(1, 2), (2, 3), (3, 4), (4, 1), (1, 5), (5, 6), (6, 2), (6, 7), (7, 3), (7, 8), (8, 4), (5, 8)]


def m1() -> QuboModel:
    return QuboModel(2, (-1.0, -1.0), {(0, 1): 2.0})


def two_squares() -> SelColInstance:
    edges = frozenset((i - 1, j - 1) for i, j in TWO_SQUARES_EDGES_1BASED)
    return SelColInstance(8, edges, ((0, 4), (1, 5), (2, 6), (3, 7)))


def qcpp3() -> QcppInstance:
    """Complete digraph on three vertices with every consecutive arc pair costing 1."""
    arcs = ((0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1))
    cost = {(a, b): 1.0 for a, (_, h) in enumerate(arcs) for b, (t, _) in enumerate(arcs) if h == t}
    return QcppInstance(3, arcs, cost)


def qap2() -> QapInstance:
    return QapInstance(np.array([[0.0, 1.0], [1.0, 0.0]]), np.array([[0.0, 3.0], [3.0, 0.0]]))


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES
