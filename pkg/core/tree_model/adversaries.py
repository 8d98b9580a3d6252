import logging

import numpy as np

from core.errors import ParameterError
from core.random_streams import stream
from core.tree_model.tree import Tree, flip_odd_levels

logger = logging.getLogger('app')


def cutting_adversary_majority_breaker(t: Tree) -> Tree:
    """
    Cut every leaf that agrees with the root but hangs below a parent of the opposite spin.

    Each removed edge joins opposite spins, so the attack is a legal monotone cut. It removes
    about eps / 2 of the leaves, all of them votes for the root's spin.

    :param t: Broadcast tree with its spins.
    :return: The root component after the cuts.
    :rtype: Tree
    """
    if t.size == 1:
        return t
    parent = np.maximum(t.parent, 0)
    doomed = t.leaf & (t.spins == t.root_spin) & (t.spins[parent] != t.spins)
    doomed[0] = False
    logger.debug(f"Majority breaker removed {int(doomed.sum())} of {int(t.leaf.sum())} leaves")
    return t.subset(~doomed, leaf=t.leaf & ~doomed)


def strong_adversary_opposite_path(t: Tree) -> Tree:
    """
    Replace every maximal subtree hanging below a spin change by a bare path down to depth R
    whose single leaf carries the spin opposite to the root.

    :param t: Broadcast tree.
    :return: The rewritten tree.
    :rtype: Tree
    """
    n = t.size
    root = t.root_spin
    parent = np.maximum(t.parent, 0)
    cluster = np.zeros(n, dtype=bool)
    cluster[0] = True
    for level in t.levels[1:]:
        cluster[level] = cluster[parent[level]] & (t.spins[level] == t.spins[parent[level]])
    heads = np.flatnonzero(~cluster & cluster[parent])
    if heads.size == 0:
        return t

    kept = np.flatnonzero(cluster)
    remap = np.full(n, -1, dtype=np.int64)
    remap[kept] = np.arange(kept.size)
    remap[heads] = np.arange(kept.size, kept.size + heads.size)
    parents = [np.where(t.parent[kept] >= 0, remap[parent[kept]], -1), remap[parent[heads]]]
    leaves = [t.leaf[kept], t.depth[heads] == t.height]

    lengths = np.maximum(t.height - t.depth[heads], 0)
    tail = np.repeat(remap[heads], lengths)
    total = kept.size + heads.size
    # chain j of head h hangs below the previous chain node (or below h itself)
    offsets = np.concatenate([[0], np.cumsum(lengths)[:-1]])
    step = np.arange(tail.size) - np.repeat(offsets, lengths)
    chain_ids = total + np.arange(tail.size)
    parents.append(np.where(step == 0, tail, chain_ids - 1))
    leaves.append(step == np.repeat(lengths, lengths) - 1)

    spins = np.concatenate([t.spins[kept], np.full(heads.size + tail.size, -root, dtype=np.int8)])
    return Tree.build(np.concatenate(parents), spins, leaf=np.concatenate(leaves), height=t.height)


def strong_adversary_asymmetric(t: Tree, eps: float, asym: float, sign: int, seed: int) -> Tree:
    """
    Turn a symmetric tree with noise eps + asym into the asymmetric chain whose flip
    probability is eps - asym out of spin ``sign`` and eps + asym out of spin ``-sign``.

    Top-down, every ``sign -> -sign`` transition flips its whole subtree with probability
    2 asym / (eps + asym); deeper transitions are examined after the flips above them.

    :param t: Broadcast tree with flip probability eps + asym.
    :param eps: Symmetric part of the noise.
    :param asym: Asymmetry magnitude, at most eps.
    :param sign: Spin (+1 or -1) whose outgoing transitions are thinned.
    :param seed: Seed for the ``asymmetric`` stream.
    :return: The re-labelled tree.
    :rtype: Tree
    """
    if asym < 0 or asym > eps:
        raise ParameterError(f"Asymmetry must lie in [0, eps]={eps}, got {asym}")
    if sign not in (1, -1):
        raise ParameterError(f"Sign must be +1 or -1, got {sign}")
    if asym == 0:
        return t
    chance = 2 * asym / (eps + asym)
    draws = stream(seed, 'asymmetric').random(t.size)
    parity = np.ones(t.size, dtype=np.int8)
    spins = t.spins.copy()
    parent = np.maximum(t.parent, 0)
    for level in t.levels[1:]:
        parity[level] = parity[parent[level]]
        spins[level] = t.spins[level] * parity[level]
        turn = (spins[parent[level]] == sign) & (spins[level] == -sign) & (draws[level] < chance)
        parity[level[turn]] *= -1
        spins[level[turn]] *= -1
    return t.with_spins(spins)


def conjugate(adversary):
    """Dissortative form of an adversary: apply it between two odd-level spin flips."""
    def dissortative(t: Tree, *args, **kwargs) -> Tree:
        return flip_odd_levels(adversary(flip_odd_levels(t), *args, **kwargs))

    dissortative.__name__ = f"dissortative_{adversary.__name__}"
    return dissortative
