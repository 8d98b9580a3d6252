from dataclasses import dataclass

import numpy as np

from core.random_streams import stream
from core.sbm.params import Mode
from core.tree_model.tree import Tree, flip_odd_levels


@dataclass(frozen=True)
class RootEstimate:
    """
    Estimated root spin.

    Attributes:
        spin: +1 or -1.
        confidence: Posterior probability of ``spin``; only the exact posterior fills it in.
    """
    spin: int
    confidence: float = None


def _anchor(t: Tree) -> int:
    # tie coins are read relative to the first leaf, so negating the leaves negates every coin
    leaves = t.leaves
    return int(t.spins[leaves[0]]) if leaves.size else 1


def _coins(t: Tree, seed: int, label: str, size: int) -> np.ndarray:
    draws = stream(seed, label).random(size)
    return (np.where(draws < 0.5, 1, -1) * _anchor(t)).astype(np.int8)


def majority_vote(t: Tree, seed: int) -> RootEstimate:
    """
    Sign of the sum of the leaf spins; ties and leafless trees are settled by a fair coin.

    :param t: Tree with its leaf set.
    :param seed: Seed for the tie coin.
    :return: Estimate.
    :rtype: RootEstimate
    """
    total = int(t.leaf_spins.astype(np.int64).sum())
    if total != 0:
        return RootEstimate(spin=1 if total > 0 else -1)
    return RootEstimate(spin=int(_coins(t, seed, 'majority', 1)[0]))


def recursive_majority(t: Tree, seed: int, mode: Mode = Mode.ASSORTATIVE) -> RootEstimate:
    """
    Bottom-up majority of majorities.

    A leaf reports its spin; an internal node reports the majority of its children's reports;
    ties and childless internal nodes report an independent fair coin. In dissortative mode the
    odd levels are flipped first, which turns the vote into an anti-majority at every step.

    :param t: Tree with its leaf set.
    :param seed: Seed for the per-node coins.
    :param mode: Orientation.
    :return: The root's report.
    :rtype: RootEstimate
    """
    if Mode(mode) is Mode.DISSORTATIVE:
        t = flip_odd_levels(t)
    coins = _coins(t, seed, 'recursive-majority', t.size)
    report = np.zeros(t.size, dtype=np.int8)
    child_sum = np.zeros(t.size, dtype=np.int64)
    has_children = t.child_count > 0
    for level in reversed(t.levels):
        total = child_sum[level]
        votes = np.sign(total).astype(np.int8)
        votes = np.where(total == 0, coins[level], votes)
        votes = np.where(has_children[level], votes, coins[level])
        votes = np.where(t.leaf[level], t.spins[level], votes)
        report[level] = votes
        if level[0] > 0:
            np.add.at(child_sum, t.parent[level], votes)
    return RootEstimate(spin=int(report[0]))


def majority_plus_probability(t: Tree) -> float:
    """Probability, over the tie coin, that :func:`majority_vote` answers +1."""
    total = int(t.leaf_spins.astype(np.int64).sum())
    return 1.0 if total > 0 else 0.0 if total < 0 else 0.5


def recursive_majority_plus_probability(t: Tree) -> float:
    """
    Probability, over all tie coins, that :func:`recursive_majority` answers +1.

    Children's reports are independent given the leaves, so each node's law follows from the
    convolution of its children's +1/-1 laws.
    """
    plus = np.full(t.size, 0.5)
    for level in reversed(t.levels):
        for v in level:
            if t.leaf[v]:
                plus[v] = 1.0 if t.spins[v] == 1 else 0.0
                continue
            children = t.children(v)
            if children.size == 0:
                continue
            # law of the vote sum, indexed by sum + len(children)
            law = np.ones(1)
            for p in plus[children]:
                law = np.convolve(law, [1 - p, 0, p])
            middle = children.size
            plus[v] = law[middle + 1:].sum() + 0.5 * law[middle]
    return float(plus[0])
