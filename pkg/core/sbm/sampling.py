import logging

import numpy as np

from core.random_streams import stream
from core.sbm.graph import Graph
from core.sbm.params import ModelParams

logger = logging.getLogger('app')


def skip_sample(rng: np.random.Generator, total: int, p: float) -> np.ndarray:
    """
    Select each of ``total`` slots independently with probability ``p``.

    Geometric skips jump directly between selected slots, so the cost is proportional to the
    number of selections rather than to ``total``.

    :param rng: Random stream.
    :param total: Number of slots.
    :param p: Selection probability.
    :return: Sorted selected slot indices.
    :rtype: numpy.ndarray
    """
    if total <= 0 or p <= 0:
        return np.empty(0, dtype=np.int64)
    if p >= 1:
        return np.arange(total, dtype=np.int64)
    chunks = []
    position = -1
    expected = total * p
    batch = int(expected + 5 * np.sqrt(expected) + 16)
    while True:
        gaps = rng.geometric(p, size=batch)
        positions = position + np.cumsum(gaps)
        inside = positions[positions < total]
        chunks.append(inside)
        if inside.size < positions.size:
            break
        position = int(positions[-1])
    return np.concatenate(chunks).astype(np.int64)


def _triangular_pairs(index: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # index enumerates pairs (i, j), j < i, as i(i-1)/2 + j
    i = np.floor((1 + np.sqrt(1 + 8 * index.astype(np.float64))) / 2).astype(np.int64)
    i -= (i * (i - 1) // 2 > index)
    i += ((i + 1) * i // 2 <= index)
    j = index - i * (i - 1) // 2
    return i, j


def _within(rng: np.random.Generator, group: np.ndarray, p: float) -> np.ndarray:
    size = group.size
    picked = skip_sample(rng, size * (size - 1) // 2, p)
    i, j = _triangular_pairs(picked)
    return np.column_stack([group[j], group[i]])


def _across(rng: np.random.Generator, left: np.ndarray, right: np.ndarray, p: float) -> np.ndarray:
    picked = skip_sample(rng, left.size * right.size, p)
    return np.column_stack([left[picked // max(right.size, 1)], right[picked % max(right.size, 1)]])


def sample_spins(n: int, seed: int) -> np.ndarray:
    """I.i.d. fair +1/-1 spins for ``n`` nodes."""
    return np.where(stream(seed, 'spins').random(n) < 0.5, 1, -1).astype(np.int8)


def sample_precursor(params: ModelParams, seed: int) -> Graph:
    """
    Sample G(n, a/n, b/n) with i.i.d. fair community labels.

    Each unordered pair is an edge independently with probability a/n when the two spins agree
    and b/n otherwise. Markings are all NONE.

    :param params: Model parameters.
    :type params: ModelParams
    :param seed: Seed; identical (params, seed) give identical graphs.
    :return: The precursor graph.
    :rtype: Graph
    """
    n = params.n
    spins = sample_spins(n, seed)
    plus = np.flatnonzero(spins == 1)
    minus = np.flatnonzero(spins == -1)
    rng = stream(seed, 'edges')
    within_p, across_p = params.a / n, params.b / n
    edges = np.concatenate([
        _within(rng, plus, within_p),
        _within(rng, minus, within_p),
        _across(rng, plus, minus, across_p),
    ])
    edges = np.sort(edges, axis=1)
    logger.debug(f"Sampled precursor with n={n}, {edges.shape[0]} edges (a={params.a}, b={params.b}, seed={seed})")
    return Graph.from_edges(n, edges, spins)
