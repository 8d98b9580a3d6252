import numpy as np
import pytest

from core.graph_adversary import assign_markings
from core.sbm import Graph, ModelParams
from core.tree_model import Tree


@pytest.fixture
def path_graph() -> Graph:
    """u - v - w with v = 1 in the middle."""
    return Graph.from_edges(3, [(0, 1), (1, 2)], [1, 1, -1])


@pytest.fixture
def triangle_precursor() -> Graph:
    """
    Node 0 of spin +1 hangs between GOOD nodes 1 and 2 of a GOOD triangle {1, 2, 3} of spin -1.
    Each triangle node carries a pendant leaf (4, 5, 6).
    """
    edges = [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (1, 4), (2, 5), (3, 6)]
    spins = [1, -1, -1, -1, 1, 1, 1]
    return assign_markings(Graph.from_edges(7, edges, spins))


@pytest.fixture
def triangle_params() -> ModelParams:
    return ModelParams(n=7, a=3, b=1)


@pytest.fixture
def small_tree() -> Tree:
    """Root with two children, each with two leaf children, all spins +1."""
    return Tree.build([-1, 0, 0, 1, 1, 2, 2], np.ones(7, dtype=np.int8))
