from dataclasses import dataclass
from functools import cached_property

import numpy as np

from core.errors import InputError
from core.sbm.graph import Marking


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Tree:
    """
    Immutable rooted tree stored as contiguous node arrays in breadth-first order.

    Node 0 is the root and every parent index is smaller than its child's index, so one forward
    pass visits parents before children and one backward pass visits children first.

    Attributes:
        parent: Parent index per node, -1 for the root.
        depth: Distance to the root.
        spins: Spin per node in {+1, -1}.
        markings: Marking per node (Marking values), computed on the precursor.
        cut: True for nodes the adversary isolated; only the root can survive with this flag.
        leaf: Declared leaf set.
        height: Nominal depth R the tree was trimmed to.

    Methods:
        - build()
        - children()
        - levels
        - subset()
        - with_spins()
    """
    parent: np.ndarray
    depth: np.ndarray
    spins: np.ndarray
    markings: np.ndarray
    cut: np.ndarray
    leaf: np.ndarray
    height: int

    @classmethod
    def build(cls, parent, spins, markings=None, cut=None, leaf=None, height: int = None) -> 'Tree':
        """
        Build a tree from a parent array in any order with parent[i] < i or -1 for the root.

        Nodes are renumbered into breadth-first order. When ``leaf`` is omitted the leaves are
        the nodes at depth ``height`` (the deepest level if ``height`` is omitted too).

        :param parent: Parent index per node.
        :param spins: Spin per node.
        :param markings: Marking per node, NONE when omitted.
        :param cut: Cut flag per node, False when omitted.
        :param leaf: Leaf mask.
        :param height: Nominal depth.
        :return: The tree.
        :rtype: Tree
        :raises InputError: When the parent array is not a single-rooted forest ordered parent-first.
        """
        parent = np.asarray(parent, dtype=np.int64)
        n = parent.size
        if n == 0 or parent[0] != -1 or np.count_nonzero(parent < 0) != 1:
            raise InputError("A tree needs exactly one root, stored first")
        if np.any(parent[1:] >= np.arange(1, n)):
            raise InputError("Parents must precede their children")
        spins = np.asarray(spins, dtype=np.int8)
        if spins.size != n or not np.all(np.abs(spins) == 1):
            raise InputError("Spins must be +1/-1 for every node")
        markings = np.zeros(n, dtype=np.int8) if markings is None else np.asarray(markings, dtype=np.int8)
        cut = np.zeros(n, dtype=bool) if cut is None else np.asarray(cut, dtype=bool)

        # breadth-first renumbering, siblings grouped under their parent's new index
        depth = np.zeros(n, dtype=np.int64)
        rank = np.zeros(n, dtype=np.int64)
        order = [np.array([0])]
        frontier = np.zeros(n, dtype=bool)
        frontier[0] = True
        placed, d = 1, 0
        safe_parent = np.maximum(parent, 0)
        while placed < n:
            d += 1
            level = np.flatnonzero(frontier[safe_parent] & (parent >= 0))
            if level.size == 0:
                raise InputError("Parent array is not connected to the root")
            level = level[np.lexsort((level, rank[parent[level]]))]
            depth[level] = d
            rank[level] = np.arange(placed, placed + level.size)
            placed += level.size
            order.append(level)
            frontier[:] = False
            frontier[level] = True
        order = np.concatenate(order)

        height = int(depth.max()) if height is None else int(height)
        leaf = (depth == height) if leaf is None else np.asarray(leaf, dtype=bool)
        new_parent = np.where(parent[order] >= 0, rank[safe_parent[order]], -1)
        return cls(parent=_frozen(new_parent), depth=_frozen(depth[order]), spins=_frozen(spins[order].copy()),
                   markings=_frozen(markings[order].copy()), cut=_frozen(cut[order].copy()),
                   leaf=_frozen(leaf[order].copy()), height=height)

    @classmethod
    def from_levels(cls, parent: np.ndarray, depth: np.ndarray, spins: np.ndarray, markings=None, cut=None,
                    leaf=None, height: int = None) -> 'Tree':
        """Wrap arrays that are already in breadth-first order (samplers produce them that way)."""
        n = parent.size
        return cls(parent=_frozen(np.asarray(parent, dtype=np.int64)), depth=_frozen(np.asarray(depth, dtype=np.int64)),
                   spins=_frozen(np.asarray(spins, dtype=np.int8)),
                   markings=_frozen(np.zeros(n, dtype=np.int8) if markings is None else np.asarray(markings, dtype=np.int8)),
                   cut=_frozen(np.zeros(n, dtype=bool) if cut is None else np.asarray(cut, dtype=bool)),
                   leaf=_frozen((depth == height) if leaf is None else np.asarray(leaf, dtype=bool)),
                   height=int(height))

    @property
    def size(self) -> int:
        return int(self.parent.size)

    @property
    def root_spin(self) -> int:
        return int(self.spins[0])

    @cached_property
    def child_count(self) -> np.ndarray:
        return _frozen(np.bincount(self.parent[1:], minlength=self.size).astype(np.int64))

    @cached_property
    def degree(self) -> np.ndarray:
        """Degree of each node with the tree viewed as a graph: children plus the parent edge."""
        degree = self.child_count.copy()
        degree[1:] += 1
        return _frozen(degree)

    @cached_property
    def levels(self) -> list[np.ndarray]:
        """Node indices per depth; contiguous ranges because of the breadth-first order."""
        bounds = np.searchsorted(self.depth, np.arange(int(self.depth.max()) + 2))
        return [np.arange(bounds[d], bounds[d + 1]) for d in range(bounds.size - 1)]

    @cached_property
    def _child_index(self) -> tuple[np.ndarray, np.ndarray]:
        starts = np.zeros(self.size + 1, dtype=np.int64)
        np.cumsum(self.child_count, out=starts[1:])
        return starts, np.arange(1, self.size)

    def children(self, v: int) -> np.ndarray:
        # children of a node are contiguous in breadth-first order
        starts, ordered = self._child_index
        return ordered[starts[v]:starts[v + 1]]

    @property
    def leaves(self) -> np.ndarray:
        return np.flatnonzero(self.leaf)

    @property
    def leaf_spins(self) -> np.ndarray:
        return self.spins[self.leaf]

    @property
    def is_extinct(self) -> bool:
        """True when no leaf survived; estimators fall back to a coin."""
        return not bool(self.leaf.any())

    def subset(self, keep, leaf=None) -> 'Tree':
        """
        Restrict to a parent-closed node mask.

        :param keep: Boolean mask; every kept non-root node must have a kept parent.
        :param leaf: New leaf mask over the ORIGINAL nodes; defaults to the old leaves still kept.
        :return: The restricted tree.
        :rtype: Tree
        """
        keep = np.asarray(keep, dtype=bool)
        if not keep[0] or np.any(keep[1:] & ~keep[np.maximum(self.parent[1:], 0)]):
            raise InputError("Kept nodes must form a subtree containing the root")
        index = np.flatnonzero(keep)
        remap = np.full(self.size, -1, dtype=np.int64)
        remap[index] = np.arange(index.size)
        parent = np.where(self.parent[index] >= 0, remap[np.maximum(self.parent[index], 0)], -1)
        leaf = self.leaf if leaf is None else np.asarray(leaf, dtype=bool)
        return Tree.from_levels(parent, self.depth[index], self.spins[index], self.markings[index], self.cut[index],
                                leaf[index].copy(), self.height)

    def with_spins(self, spins) -> 'Tree':
        return Tree.from_levels(self.parent, self.depth, np.asarray(spins, dtype=np.int8), self.markings, self.cut,
                                self.leaf, self.height)

    def marked(self) -> np.ndarray:
        return self.markings == Marking.MARKED


def flip_odd_levels(t: Tree) -> Tree:
    """
    Negate the spins at odd depth.

    This maps a broadcast tree with flip probability eps onto one with flip probability 1 - eps,
    turning the dissortative model into the assortative one and back.
    """
    sign = np.where(t.depth % 2 == 1, -1, 1).astype(np.int8)
    return t.with_spins(t.spins * sign)
