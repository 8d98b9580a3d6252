import math
from dataclasses import dataclass

import numpy as np

from core.errors import ParameterError
from core.graph_adversary.adversary import delta_of_eps
from core.tree_model.tree import Tree


def eps_prime(eps: float) -> float:
    """
    Effective noise on each edge next to a MARKED node once the cut decision is marginalised.

    :param eps: Noise in [0, 1/2).
    :return: 1/2 - sqrt((1 - 3 eps) / (1 + eps)) / 2 when eps <= 1/3, else 1/2.
    :rtype: float
    """
    if not 0 <= eps < 0.5:
        raise ParameterError(f"Noise must lie in [0, 1/2), got {eps}")
    if eps <= 1 / 3:
        return 0.5 - 0.5 * math.sqrt(max(1 - 3 * eps, 0.0) / (1 + eps))
    return 0.5


def cut_probability(eps: float) -> float:
    """Probability that a MARKED node is cut, marginally over the spins: eps^2 * delta."""
    return eps ** 2 * delta_of_eps(eps)


def marked_path_same_spin(eps: float) -> float:
    """P(both ends of a MARKED node's two-edge path agree | not cut)."""
    delta = delta_of_eps(eps)
    return ((1 - eps) ** 2 + eps ** 2 * (1 - delta)) / (1 - eps ** 2 * delta)


def d_plus_table(eps: float) -> np.ndarray:
    """
    Joint law of a non-cut MARKED root's two children relative to the root.

    Index 0 stands for "same spin as the root", index 1 for "opposite".

    :param eps: Noise in [0, 1/2).
    :return: 2x2 table summing to 1.
    :rtype: numpy.ndarray
    """
    delta = delta_of_eps(eps)
    norm = 1 - delta * eps ** 2
    return np.array([[(1 - eps) ** 2, eps * (1 - eps)],
                     [eps * (1 - eps), eps ** 2 * (1 - delta)]]) / norm


@dataclass(frozen=True, eq=False)
class EdgeNoise:
    """
    Flip probability on the edge from each node to its parent.

    Attributes:
        values: Per-node flip probability; the root entry is unused.
        joint_root: True when the root's two child edges follow the joint table instead of
            independent flips (non-cut MARKED root).
        eps: Base noise the assignment was derived from.
    """
    values: np.ndarray
    joint_root: bool = False
    eps: float = 0.0

    @property
    def theta(self) -> np.ndarray:
        return 1 - 2 * self.values


def uniform_edge_noise(t: Tree, eps: float) -> EdgeNoise:
    values = np.full(t.size, eps, dtype=np.float64)
    values[0] = np.nan
    return EdgeNoise(values=values, eps=eps)


def _root_is_joint(t: Tree) -> bool:
    return bool(t.marked()[0] and not t.cut[0] and t.child_count[0] == 2)


def dist4_edge_noise(t: Tree, eps: float) -> EdgeNoise:
    """
    Noise assignment of the topology-first model: eps' on edges touching a MARKED node, eps
    elsewhere. A non-cut MARKED root's edges carry their marginal flip probability and are
    flagged joint.

    :param t: Tree with precursor markings.
    :param eps: Base noise.
    :return: Edge noise.
    :rtype: EdgeNoise
    """
    marked = t.marked()
    parent = np.maximum(t.parent, 0)
    touches = marked | marked[parent]
    values = np.where(touches, eps_prime(eps), eps).astype(np.float64)
    joint = _root_is_joint(t)
    if joint:
        table = d_plus_table(eps)
        values[t.children(0)] = table[1].sum()
    values[0] = np.nan
    return EdgeNoise(values=values, joint_root=joint, eps=eps)


def eased_edge_noise(t: Tree, eps: float) -> EdgeNoise:
    """Topology-first noise with the root's edges made noiseless (an easier reconstruction problem)."""
    noise = dist4_edge_noise(t, eps)
    values = noise.values.copy()
    values[t.children(0)] = 0.0
    return EdgeNoise(values=values, joint_root=False, eps=eps)
