import math

import networkx as nx
import numpy as np

from core.errors import InputError, ParameterError
from core.sbm.graph import Graph
from core.sbm.params import ModelParams


def coupling_radius(params: ModelParams) -> int:
    """
    Radius up to which a neighbourhood couples with a broadcast tree:
    floor(log n / (10 log(2(a + b)))) - 3. Can be negative for small n.

    :param params: Model parameters.
    :return: The radius.
    :rtype: int
    :raises ParameterError: If 2(a + b) <= 1.
    """
    base = 2 * (params.a + params.b)
    if base <= 1:
        raise ParameterError(f"Log base 2(a+b)={base} must exceed 1")
    ratio = math.log(params.n) / (10 * math.log(base))
    return math.floor(ratio + 1e-9) - 3


def extract_ball(g: Graph, center: int, radius: int) -> tuple[Graph, set[int]]:
    """
    Induced subgraph on nodes within ``radius`` of ``center``.

    Nodes of the ball are relabelled 0..size-1 in BFS distance order, the center is node 0.
    The boundary is returned in the ORIGINAL labels.

    :param g: Graph.
    :param center: Center node.
    :param radius: Graph distance bound.
    :return: (ball subgraph, nodes at distance exactly radius).
    :rtype: tuple[Graph, set[int]]
    """
    if not 0 <= center < g.n:
        raise InputError(f"Center {center} not in graph of {g.n} nodes")
    if radius < 0:
        raise ParameterError(f"Radius must be non-negative, got {radius}")
    distances = nx.single_source_shortest_path_length(g.to_networkx(), center, cutoff=radius)
    nodes = sorted(distances, key=lambda v: (distances[v], v))
    boundary = {v for v, d in distances.items() if d == radius}
    if radius == 0 and g.degrees[center] == 0:
        boundary = set()
    return g.subgraph(np.array(nodes, dtype=np.int64)), boundary


def is_tree(g: Graph) -> bool:
    """True when g is connected and acyclic."""
    return g.n > 0 and g.edge_count == g.n - 1 and nx.is_connected(g.to_networkx())
