import pytest

from jacdiag.corpus import corpus
from jacdiag.diagrams import JacobiGraph


@pytest.fixture(scope="session")
def small_corpus():
    return corpus(4, 2)


@pytest.fixture(scope="session")
def theta_graph():
    return JacobiGraph.make([(0, 1, 2), (3, 4, 5)], (),
                            [(0, 3), (1, 4), (2, 5)])


@pytest.fixture(scope="session")
def k4_graph():
    return JacobiGraph.make(
        [(0, 1, 2), (3, 4, 5), (6, 7, 8), (9, 10, 11)], (),
        [(0, 3), (1, 6), (2, 9), (4, 7), (5, 10), (8, 11)])


@pytest.fixture(scope="session")
def wheel3_graph():
    # hub plus a triangle rim: 4 vertices, 6 edges
    return JacobiGraph.make(
        [(0, 1, 2), (3, 4, 5), (6, 7, 8), (9, 10, 11)], (),
        [(0, 3), (1, 6), (2, 9), (4, 8), (7, 11), (10, 5)])


@pytest.fixture(scope="session")
def ladder_graph(small_corpus):
    # the connected two-vertex, two-leg diagram (two internal rungs)
    cands = [g for g in small_corpus
             if len(g.vertices) == 2 and len(g.legs) == 2 and g.is_connected()]
    assert len(cands) == 1
    return cands[0]


@pytest.fixture(scope="session")
def dumbbell_raw():
    # two loop vertices joined by a bridge; antisymmetry-zero as an element
    return JacobiGraph.make([(0, 1, 2), (3, 4, 5)], (),
                            [(0, 1), (3, 4), (2, 5)])
