import itertools
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from core.errors import CapacityError, InputError, ParameterError
from core.graph_adversary.adversary import delta_of_eps
from core.sbm.graph import Marking
from core.tree_model.noise import EdgeNoise, d_plus_table, dist4_edge_noise, uniform_edge_noise
from core.tree_model.tree import Tree
from core.tree_reconstruct.estimators import RootEstimate

NODE_LIMIT = 10_000
HIDDEN_LIMIT = 20
LEAF_LIMIT = 20
PATTERN_LIMIT = 12


@dataclass(frozen=True)
class PosteriorModel:
    """
    Law the posterior is computed under.

    Attributes:
        kind: ``plain`` (independent flips eps), ``dist4`` (topology-first noise with eps' and the
            joint root table) or ``dist2`` (spin-first law, by brute force over hidden spins).
        eps: Base noise.
    """
    kind: str
    eps: float

    def __post_init__(self):
        if self.kind not in ('plain', 'dist4', 'dist2'):
            raise ParameterError(f"Unknown posterior model '{self.kind}'")


def _log(values) -> np.ndarray:
    with np.errstate(divide='ignore'):
        return np.log(values)


def root_log_likelihood(t: Tree, noise: EdgeNoise, leaf_spins: np.ndarray = None) -> np.ndarray:
    """
    log P(leaf spins | root spin) for root spin +1 (index 0) and -1 (index 1).

    :param t: Tree.
    :param noise: Edge noise; a joint root uses the pair table for the root's two edges.
    :param leaf_spins: Spins for ``t.leaves`` in order; the tree's own spins when omitted.
    :return: Length-2 array of log-likelihoods.
    :rtype: numpy.ndarray
    """
    n = t.size
    evidence = np.zeros((n, 2))
    spins = t.spins[t.leaf] if leaf_spins is None else np.asarray(leaf_spins)
    leaves = t.leaves
    evidence[leaves, 0] = np.where(spins == 1, 0.0, -np.inf)
    evidence[leaves, 1] = np.where(spins == 1, -np.inf, 0.0)

    keep, flip = _log(1 - noise.values), _log(noise.values)
    for level in reversed(t.levels[1:]):
        if level[0] == 1 and noise.joint_root:
            break
        message = np.column_stack([
            np.logaddexp(keep[level] + evidence[level, 0], flip[level] + evidence[level, 1]),
            np.logaddexp(keep[level] + evidence[level, 1], flip[level] + evidence[level, 0]),
        ])
        np.add.at(evidence, t.parent[level], message)

    if noise.joint_root:
        first, second = t.children(0)
        table = _log(d_plus_table(noise.eps))
        for s in (0, 1):
            # relative index 0 keeps the root's spin, 1 flips it
            terms = [table[a, b] + evidence[first, s ^ a] + evidence[second, s ^ b] for a in (0, 1) for b in (0, 1)]
            evidence[0, s] = logsumexp(terms)
    return evidence[0].copy()


def _estimate(log_likelihood: np.ndarray) -> RootEstimate:
    if np.all(np.isneginf(log_likelihood)):
        raise InputError("Observed leaves have zero likelihood under the model")
    plus = float(np.exp(log_likelihood[0] - np.logaddexp(log_likelihood[0], log_likelihood[1])))
    return RootEstimate(spin=1, confidence=plus) if plus >= 0.5 else RootEstimate(spin=-1, confidence=1 - plus)


def exact_posterior(t: Tree, model: PosteriorModel) -> RootEstimate:
    """
    Maximum a posteriori root spin with its posterior probability, uniform prior on the root.

    :param t: Observed tree (topology, markings, leaf spins).
    :param model: Law to condition under.
    :return: Estimate with confidence.
    :rtype: RootEstimate
    :raises CapacityError: Above 10^4 nodes for belief recursion, or above 20 leaves / hidden
        nodes for the spin-first brute force.
    """
    if t.is_extinct:
        return RootEstimate(spin=1, confidence=0.5)
    if model.kind == 'dist2':
        return _estimate(dist2_root_log_likelihood(t, model.eps))
    if t.size > NODE_LIMIT:
        raise CapacityError(f"Exact posterior is limited to {NODE_LIMIT} nodes, got {t.size}")
    noise = uniform_edge_noise(t, model.eps) if model.kind == 'plain' else dist4_edge_noise(t, model.eps)
    return _estimate(root_log_likelihood(t, noise))


def dist2_root_log_likelihood(t: Tree, eps: float) -> np.ndarray:
    """
    Spin-first likelihood of the observation by summing over every hidden spin assignment.

    Each observed edge contributes its flip probability and each observed MARKED node the
    chance it escaped the cut, 1 - delta when both neighbours oppose it. Everything removed by
    the adversary or the trimming contributes a factor that does not depend on the root.

    :param t: Observed spin-first tree.
    :param eps: Noise in [0, 1/2).
    :return: Length-2 array of log-likelihoods (up to a shared constant).
    :rtype: numpy.ndarray
    """
    if t.leaf[0]:
        return np.array([0.0, -np.inf]) if t.spins[0] == 1 else np.array([-np.inf, 0.0])
    leaves = t.leaves
    hidden = np.flatnonzero(~t.leaf)
    hidden = hidden[hidden != 0]
    if leaves.size > LEAF_LIMIT or hidden.size > HIDDEN_LIMIT:
        raise CapacityError(f"Spin-first brute force is limited to {LEAF_LIMIT} leaves and {HIDDEN_LIMIT} hidden "
                            f"nodes, got {leaves.size} and {hidden.size}")
    delta = delta_of_eps(eps)
    configs = np.array(list(itertools.product((1, -1), repeat=hidden.size)), dtype=np.int8).reshape(-1, hidden.size)
    result = np.zeros(2)
    child = np.arange(1, t.size)
    up = t.parent[1:]
    marked = np.flatnonzero(t.markings == Marking.MARKED)
    for index, root in enumerate((1, -1)):
        spins = np.tile(t.spins, (configs.shape[0], 1))
        spins[:, 0] = root
        spins[:, hidden] = configs
        agree = spins[:, child] == spins[:, up]
        log_weight = np.where(agree, np.log1p(-eps), _log(eps)).sum(axis=1)
        for v in marked:
            neighbours = t.children(v) if v == 0 else np.append(t.children(v), t.parent[v])
            if neighbours.size != 2:
                continue
            opposed = np.all(spins[:, neighbours] == -spins[:, [v]], axis=1)
            log_weight = log_weight + np.where(opposed, _log(1 - delta), 0.0)
        result[index] = logsumexp(log_weight)
    return result


def map_advantage(t: Tree, noise: EdgeNoise) -> float:
    """
    Exact advantage 2 P(MAP correct) - 1 of the optimal estimator on a fixed tree, enumerating
    every leaf pattern.

    :param t: Tree (its leaf spins are ignored).
    :param noise: Edge noise.
    :return: Advantage in [0, 1].
    :rtype: float
    :raises CapacityError: Above 12 leaves.
    """
    count = t.leaves.size
    if count > PATTERN_LIMIT:
        raise CapacityError(f"Leaf-pattern enumeration is limited to {PATTERN_LIMIT} leaves, got {count}")
    total = 0.0
    for pattern in itertools.product((1, -1), repeat=count):
        plus, minus = np.exp(root_log_likelihood(t, noise, np.array(pattern, dtype=np.int8)))
        total += abs(plus - minus)
    return total / 2


def success_probability(t: Tree, noise: EdgeNoise, plus_probability) -> float:
    """
    Exact success probability of an estimator on a fixed tree with a uniform root.

    :param t: Tree.
    :param noise: Edge noise.
    :param plus_probability: Callable taking the tree with a leaf pattern applied and returning
        the probability the estimator answers +1.
    :return: Success probability.
    :rtype: float
    """
    count = t.leaves.size
    if count > PATTERN_LIMIT:
        raise CapacityError(f"Leaf-pattern enumeration is limited to {PATTERN_LIMIT} leaves, got {count}")
    total = 0.0
    for pattern in itertools.product((1, -1), repeat=count):
        pattern = np.array(pattern, dtype=np.int8)
        plus, minus = np.exp(root_log_likelihood(t, noise, pattern))
        spins = t.spins.copy()
        spins[t.leaf] = pattern
        q = plus_probability(t.with_spins(spins))
        total += 0.5 * (plus * q + minus * (1 - q))
    return total
