import numpy as np
import scipy.sparse as sp

from core.errors import InputError
from core.sbm.graph import Graph, Marking


def goodness(adjacency: sp.csr_matrix) -> np.ndarray:
    """
    Boolean mask of nodes with at least 3 neighbours whose degree differs from 2.

    :param adjacency: Symmetric 0/1 adjacency.
    :return: GOOD mask.
    :rtype: numpy.ndarray
    """
    degrees = np.diff(adjacency.indptr)
    not_two = (degrees != 2).astype(np.int64)
    return np.asarray(adjacency @ not_two).reshape(-1) >= 3


def marking_vector(adjacency: sp.csr_matrix) -> np.ndarray:
    """GOOD pass over all nodes, then MARKED pass: degree 2 with both neighbours GOOD."""
    degrees = np.diff(adjacency.indptr)
    good = goodness(adjacency)
    good_neighbours = np.asarray(adjacency @ good.astype(np.int64)).reshape(-1)
    marked = (degrees == 2) & (good_neighbours == 2)
    markings = np.full(adjacency.shape[0], Marking.NONE, dtype=np.int8)
    markings[good] = Marking.GOOD
    markings[marked] = Marking.MARKED
    return markings


def assign_markings(g: Graph) -> Graph:
    """
    Mark the precursor graph. Markings depend on topology only.

    :param g: Unmarked graph.
    :type g: Graph
    :return: The same graph with GOOD / MARKED / NONE markings.
    :rtype: Graph
    :raises InputError: If the graph already carries markings.
    """
    if g.is_marked:
        raise InputError("Graph is already marked; markings are assigned once, on the precursor")
    return g.with_markings(marking_vector(g.adjacency))
