import logging
from enum import Enum

import numpy as np

from core.errors import CapacityError, ParameterError
from core.graph_adversary.adversary import delta_of_eps
from core.random_streams import stream
from core.sbm.graph import Marking
from core.sbm.params import Mode
from core.tree_model.noise import cut_probability, d_plus_table, eps_prime
from core.tree_model.tree import Tree, flip_odd_levels

logger = logging.getLogger('app')

NODE_LIMIT = 25_000_000


class GoodnessRule(str, Enum):
    """Which neighbours count toward the GOOD threshold in a tree."""
    GRAPH = 'graph'
    CHILDREN = 'children'


def _check(k: float, eps: float, depth: int, lower: float = 0.0, upper: float = 1.0, open_upper: bool = False):
    if k <= 0:
        raise ParameterError(f"Branching number must be positive, got {k}")
    if depth < 0:
        raise ParameterError(f"Depth must be non-negative, got {depth}")
    if not lower <= eps <= upper or (open_upper and eps == upper):
        raise ParameterError(f"Noise {eps} outside the allowed range [{lower}, {upper}{')' if open_upper else ']'}")


def grow(k: float, depth: int, seed: int, regular: bool = False, limit: int = NODE_LIMIT) -> tuple[np.ndarray, np.ndarray]:
    """
    Grow a Galton-Watson tree level by level, Poisson(k) offspring (exactly k when ``regular``).

    :param k: Mean offspring.
    :param depth: Number of levels below the root.
    :param seed: Seed for the ``topology`` stream.
    :param regular: Use exactly k children per node.
    :param limit: Node cap.
    :return: (parent, depth) arrays in breadth-first order.
    :rtype: tuple[numpy.ndarray, numpy.ndarray]
    :raises CapacityError: When the tree would exceed ``limit`` nodes.
    """
    rng = stream(seed, 'topology')
    parents = [np.array([-1], dtype=np.int64)]
    depths = [np.zeros(1, dtype=np.int64)]
    level = np.zeros(1, dtype=np.int64)
    total = 1
    for d in range(1, depth + 1):
        counts = np.full(level.size, int(k), dtype=np.int64) if regular else rng.poisson(k, size=level.size)
        born = int(counts.sum())
        if total + born > limit:
            raise CapacityError(f"Tree exceeds {limit} nodes at depth {d}")
        parents.append(np.repeat(level, counts))
        depths.append(np.full(born, d, dtype=np.int64))
        level = np.arange(total, total + born, dtype=np.int64)
        total += born
        if born == 0:
            break
    return np.concatenate(parents), np.concatenate(depths)


def root_spin(seed: int) -> int:
    return 1 if stream(seed, 'root').random() < 0.5 else -1


def flips(size: int, eps, seed: int, label: str = 'flips') -> np.ndarray:
    return np.where(stream(seed, label).random(size) < eps, -1, 1).astype(np.int8)


def tree_markings(parent: np.ndarray, rule: GoodnessRule = GoodnessRule.GRAPH) -> np.ndarray:
    """
    Mark a tree viewed as a graph: a node's degree is its child count plus one for the parent edge.

    Under ``GRAPH`` a node is GOOD when at least 3 of its neighbours (children and parent) have
    degree other than 2; under ``CHILDREN`` only the children are counted. A MARKED node has
    degree 2 and two GOOD neighbours.

    :param parent: Breadth-first parent array.
    :param rule: Goodness rule.
    :return: Marking per node.
    :rtype: numpy.ndarray
    """
    n = parent.size
    child = np.arange(1, n)
    up = parent[1:]
    degree = np.bincount(up, minlength=n).astype(np.int64)
    degree[1:] += 1
    not_two = (degree != 2).astype(np.int64)
    count = np.bincount(up, weights=not_two[child], minlength=n)
    if GoodnessRule(rule) is GoodnessRule.GRAPH:
        count[1:] += not_two[up]
    good = count >= 3
    good_neighbours = np.bincount(up, weights=good[child].astype(np.int64), minlength=n)
    good_neighbours[1:] += good[up]
    marked = (degree == 2) & (good_neighbours == 2)
    markings = np.full(n, Marking.NONE, dtype=np.int8)
    markings[good] = Marking.GOOD
    markings[marked] = Marking.MARKED
    return markings


def trim(parent: np.ndarray, depth: np.ndarray, spins: np.ndarray, markings: np.ndarray, cut: np.ndarray,
         height: int) -> Tree:
    """
    Turn a depth ``height + 3`` precursor into the observed tree.

    Keeps the root's component after the cuts, drops nodes deeper than ``height``, then drops
    MARKED nodes at depth ``height`` together with their siblings; their parent becomes a leaf.

    :return: The observed tree with its leaf set.
    :rtype: Tree
    """
    n = parent.size
    alive = np.ones(n, dtype=bool)
    alive[1:] = ~cut[1:]
    # breadth-first order: one forward pass propagates removal to descendants
    for start, stop in zip(*_level_ranges(depth)):
        if start == 0:
            continue
        alive[start:stop] &= alive[parent[start:stop]]
    if cut[0]:
        alive[1:] = False
    alive &= depth <= height

    marked = markings == Marking.MARKED
    bottom = alive & (depth == height) & (depth > 0)
    exposed = np.zeros(n, dtype=bool)
    exposed[parent[bottom & marked]] = True
    if height > 0:
        alive &= ~(bottom & exposed[np.maximum(parent, 0)])
    leaf = alive & ((depth == height) | exposed)
    if cut[0]:
        leaf[:] = False
    tree = Tree.from_levels(parent, depth, spins, markings, cut, leaf, height)
    return tree.subset(alive)


def _level_ranges(depth: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    bounds = np.searchsorted(depth, np.arange(int(depth.max()) + 2))
    return bounds[:-1], bounds[1:]


def sample_plain(k: float, eps: float, depth: int, seed: int, limit: int = NODE_LIMIT) -> Tree:
    """
    Poisson(k) broadcast tree of the given depth with flip probability eps on every edge.

    Leaves are the depth-``depth`` nodes; the tree may die out before reaching them.

    :param k: Mean offspring.
    :param eps: Flip probability in [0, 1]; above 1/2 is the dissortative regime.
    :param depth: Depth R.
    :param seed: Seed.
    :return: The tree.
    :rtype: Tree
    """
    _check(k, eps, depth)
    parent, level = grow(k, depth, seed, limit=limit)
    spins = _spread(parent, level, flips(parent.size, eps, seed), root_spin(seed))
    return Tree.from_levels(parent, level, spins, height=depth)


def sample_regular(k: int, eps: float, depth: int, seed: int, limit: int = NODE_LIMIT) -> Tree:
    """k-ary broadcast tree of the given depth with flip probability eps on every edge."""
    if int(k) != k or k < 1:
        raise ParameterError(f"Regular trees need a positive integer k, got {k}")
    _check(k, eps, depth)
    parent, level = grow(k, depth, seed, regular=True, limit=limit)
    spins = _spread(parent, level, flips(parent.size, eps, seed), root_spin(seed))
    return Tree.from_levels(parent, level, spins, height=depth)


def _spread(parent: np.ndarray, depth: np.ndarray, flip: np.ndarray, spin: int) -> np.ndarray:
    spins = np.empty(parent.size, dtype=np.int8)
    spins[0] = spin
    for start, stop in zip(*_level_ranges(depth)):
        if start == 0:
            continue
        spins[start:stop] = spins[parent[start:stop]] * flip[start:stop]
    return spins


def sample_dist2(k: float, eps: float, depth: int, seed: int, mode: Mode = Mode.ASSORTATIVE,
                 limit: int = NODE_LIMIT) -> Tree:
    """
    Spin-first semirandom tree: a labelled Poisson tree attacked by the graph adversary.

    Grows a broadcast tree to depth R + 3, marks it, cuts each cuttable MARKED node with
    probability delta, then trims to depth R.

    :param k: Mean offspring.
    :param eps: Flip probability; in [0, 1/2) for the assortative mode, (1/2, 1] for the
        dissortative one, where a MARKED node is cuttable when both neighbours share its spin.
    :param depth: Depth R >= 1.
    :param seed: Seed.
    :param mode: Orientation.
    :return: The observed tree.
    :rtype: Tree
    """
    mode = Mode(mode)
    flip_noise = eps if mode is Mode.ASSORTATIVE else 1 - eps
    _check(k, flip_noise, depth, upper=0.5, open_upper=True)
    if depth < 1:
        raise ParameterError(f"Depth must be at least 1, got {depth}")
    delta = delta_of_eps(flip_noise)

    parent, level = grow(k, depth + 3, seed, limit=limit)
    spins = _spread(parent, level, flips(parent.size, eps, seed), root_spin(seed))
    markings = tree_markings(parent)
    candidates = _cuttable(parent, spins, markings, mode)
    cut = np.zeros(parent.size, dtype=bool)
    cut[candidates[stream(seed, 'adversary').random(candidates.size) < delta]] = True
    logger.debug(f"Spin-first tree: {parent.size} precursor nodes, {candidates.size} cuttable, {int(cut.sum())} cut")
    return trim(parent, level, spins, markings, cut, depth)


def sample_dist4(k: float, eps: float, depth: int, seed: int, mode: Mode = Mode.ASSORTATIVE,
                 limit: int = NODE_LIMIT) -> Tree:
    """
    Topology-first semirandom tree, equal in law to :func:`sample_dist2`.

    Grows an unlabelled Poisson tree to depth R + 3, marks it, cuts each MARKED node with
    probability eps^2 delta regardless of spins, then broadcasts with eps' on edges touching a
    MARKED node and eps elsewhere; a non-cut MARKED root draws its two children jointly.

    :param k: Mean offspring.
    :param eps: Flip probability (see :func:`sample_dist2`).
    :param depth: Depth R >= 1.
    :param seed: Seed.
    :param mode: Orientation; the dissortative tree is the odd-level flip of the assortative one.
    :return: The observed tree.
    :rtype: Tree
    """
    mode = Mode(mode)
    if mode is Mode.DISSORTATIVE:
        return flip_odd_levels(sample_dist4(k, 1 - eps, depth, seed, limit=limit))
    _check(k, eps, depth, upper=0.5, open_upper=True)
    if depth < 1:
        raise ParameterError(f"Depth must be at least 1, got {depth}")

    parent, level = grow(k, depth + 3, seed, limit=limit)
    markings = tree_markings(parent)
    marked = markings == Marking.MARKED
    cut = marked & (stream(seed, 'adversary').random(parent.size) < cut_probability(eps))

    noise = np.where(marked | marked[np.maximum(parent, 0)], eps_prime(eps), eps)
    flip = np.where(stream(seed, 'flips').random(parent.size) < noise, -1, 1).astype(np.int8)
    if marked[0] and not cut[0]:
        first, second = np.flatnonzero(parent == 0)[:2]
        table = d_plus_table(eps).reshape(-1)
        outcome = stream(seed, 'root-pair').choice(4, p=table)
        flip[first] = 1 if outcome // 2 == 0 else -1
        flip[second] = 1 if outcome % 2 == 0 else -1
    spins = _spread(parent, level, flip, root_spin(seed))
    return trim(parent, level, spins, markings, cut, depth)


def _cuttable(parent: np.ndarray, spins: np.ndarray, markings: np.ndarray, mode: Mode) -> np.ndarray:
    # a MARKED node has degree 2; it is cuttable when both neighbours hold the wanted spin
    n = parent.size
    wanted = -spins if mode is Mode.ASSORTATIVE else spins
    up = parent[1:]
    matches = np.bincount(up, weights=(spins[1:] == wanted[up]), minlength=n)
    matches[1:] += spins[up] == wanted[1:]
    return np.flatnonzero((markings == Marking.MARKED) & (matches == 2))
