import numpy as np

from core.tree_model.noise import EdgeNoise
from core.tree_model.tree import Tree


def path_products(t: Tree, noise: EdgeNoise) -> np.ndarray:
    """Product of 1 - 2 eps_e along the path from the root to each node (1 at the root)."""
    theta = noise.theta
    products = np.ones(t.size)
    for level in t.levels[1:]:
        products[level] = products[t.parent[level]] * theta[level]
    return products


def advantage_bound(t: Tree, noises: EdgeNoise) -> float:
    """
    Upper bound sqrt(2 * sum over leaves of Theta_v^2) on the advantage of any root estimator.

    :param t: Tree with its leaf set.
    :param noises: Per-edge flip probabilities.
    :return: The bound.
    :rtype: float
    """
    products = path_products(t, noises)
    return float(np.sqrt(2 * np.sum(products[t.leaf] ** 2)))
