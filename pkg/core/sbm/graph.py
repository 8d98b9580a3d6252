from dataclasses import dataclass, replace
from enum import IntEnum
from functools import cached_property

import networkx as nx
import numpy as np
import scipy.sparse as sp

from core.errors import InputError


class Marking(IntEnum):
    NONE = 0
    GOOD = 1
    MARKED = 2

    @property
    def code(self) -> str:
        return {Marking.NONE: 'N', Marking.GOOD: 'G', Marking.MARKED: 'M'}[self]

    @classmethod
    def from_code(cls, code: str) -> 'Marking':
        try:
            return {'N': cls.NONE, 'G': cls.GOOD, 'M': cls.MARKED}[code]
        except KeyError:
            raise InputError(f"Unknown marking code '{code}'")


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


def as_spins(values, n: int = None) -> np.ndarray:
    """
    Validate and freeze a spin vector.

    :param values: Iterable of +1/-1 values.
    :param n: Expected length, if known.
    :return: Read-only int8 array.
    :rtype: numpy.ndarray
    """
    spins = np.array(values, dtype=np.int8).reshape(-1)
    if n is not None and spins.size != n:
        raise InputError(f"Expected {n} spins, got {spins.size}")
    if not np.all(np.abs(spins) == 1):
        raise InputError("Spins must be +1 or -1")
    return _frozen(spins)


@dataclass(frozen=True, eq=False)
class Graph:
    """
    Immutable undirected simple graph with per-node spins and markings.

    Adjacency is a symmetric CSR matrix with a zero diagonal. Instances never change after
    construction; every transformation returns a new graph.

    Attributes:
        n: Node count.
        adjacency: Symmetric 0/1 CSR matrix.
        spins: Per-node spin in {+1, -1}.
        markings: Per-node Marking value.

    Methods:
        - from_edges()
        - edges()
        - neighbors()
        - with_markings()
        - without_edges_at()
        - with_edges()
        - subgraph()
        - to_networkx()
    """
    n: int
    adjacency: sp.csr_matrix
    spins: np.ndarray
    markings: np.ndarray

    @classmethod
    def from_edges(cls, n: int, edges, spins, markings=None) -> 'Graph':
        """
        Build a graph from an edge list.

        :param n: Node count.
        :param edges: Iterable or (m, 2) array of node pairs.
        :param spins: Per-node spins.
        :param markings: Per-node markings, NONE if omitted.
        :return: The graph.
        :rtype: Graph
        :raises InputError: On self-loops, duplicate or out-of-range edges.
        """
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if edges.size:
            if edges.min() < 0 or edges.max() >= n:
                raise InputError(f"Edge endpoint out of range 0..{n - 1}")
            if np.any(edges[:, 0] == edges[:, 1]):
                raise InputError("Self-loops are not allowed")
            ordered = np.sort(edges, axis=1)
            keys = ordered[:, 0] * n + ordered[:, 1]
            if np.unique(keys).size != keys.size:
                raise InputError("Duplicate edges are not allowed")
        rows = np.concatenate([edges[:, 0], edges[:, 1]])
        cols = np.concatenate([edges[:, 1], edges[:, 0]])
        adjacency = sp.csr_matrix((np.ones(rows.size, dtype=np.int8), (rows, cols)), shape=(n, n))
        adjacency.sort_indices()
        if markings is None:
            markings = np.zeros(n, dtype=np.int8)
        return cls(n=n, adjacency=adjacency, spins=as_spins(spins, n), markings=_frozen(np.array(markings, dtype=np.int8)))

    @cached_property
    def degrees(self) -> np.ndarray:
        return _frozen(np.diff(self.adjacency.indptr).astype(np.int64))

    @property
    def edge_count(self) -> int:
        return int(self.adjacency.nnz // 2)

    def edges(self) -> np.ndarray:
        """Return the (m, 2) array of edges with u < v, sorted."""
        upper = sp.triu(self.adjacency, k=1).tocoo()
        order = np.lexsort((upper.col, upper.row))
        return np.column_stack([upper.row[order], upper.col[order]]).astype(np.int64)

    def neighbors(self, v: int) -> np.ndarray:
        return self.adjacency.indices[self.adjacency.indptr[v]:self.adjacency.indptr[v + 1]]

    @property
    def is_marked(self) -> bool:
        return bool(np.any(self.markings != Marking.NONE))

    def with_markings(self, markings) -> 'Graph':
        return replace(self, markings=_frozen(np.array(markings, dtype=np.int8)))

    def with_spins(self, spins) -> 'Graph':
        return replace(self, spins=as_spins(spins, self.n))

    def without_edges_at(self, nodes) -> 'Graph':
        """
        Remove every edge incident to the given nodes.

        :param nodes: Node indices to isolate.
        :return: New graph, spins and markings carried over.
        :rtype: Graph
        """
        keep = np.ones(self.n, dtype=np.int8)
        keep[np.asarray(list(nodes), dtype=np.int64)] = 0
        mask = sp.diags(keep)
        adjacency = (mask @ self.adjacency @ mask).tocsr()
        adjacency.eliminate_zeros()
        adjacency.sort_indices()
        return replace(self, adjacency=adjacency.astype(np.int8))

    def with_edges(self, edges) -> 'Graph':
        """Return a graph with the same nodes, spins and markings but the given edge list."""
        rebuilt = Graph.from_edges(self.n, edges, self.spins)
        return replace(self, adjacency=rebuilt.adjacency)

    def subgraph(self, nodes) -> 'Graph':
        """
        Induced subgraph, nodes relabelled 0..len(nodes)-1 in the given order.

        :param nodes: Node indices to keep.
        :return: Induced subgraph.
        :rtype: Graph
        """
        nodes = np.asarray(nodes, dtype=np.int64)
        adjacency = self.adjacency[nodes][:, nodes].tocsr()
        adjacency.sort_indices()
        return Graph(n=int(nodes.size), adjacency=adjacency, spins=_frozen(self.spins[nodes].copy()),
                     markings=_frozen(self.markings[nodes].copy()))

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from((v, {'spin': int(self.spins[v]), 'marking': Marking(self.markings[v]).name})
                             for v in range(self.n))
        graph.add_edges_from(map(tuple, self.edges()))
        return graph
