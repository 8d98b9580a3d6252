import logging

import numpy as np

from core.errors import ParameterError
from core.graph_adversary.adversary import delta_of_eps
from core.random_streams import stream

logger = logging.getLogger('app')

PERIOD = 6
CUTTING_LEVEL = 3


def sample_period_removals(k: float, eps: float, samples: int, seed: int, chunk: int = 10_000) -> np.ndarray:
    """
    Base-level descendants lost per period of the six-level periodic process.

    One period runs from a base node (level 0) to the next base level (level 6). Only nodes at the
    cutting level (3) may be cut: a level-3 node with a single child, whose parent and child are
    both GOOD under the children-only rule, is cut with probability delta * eps^2 and takes its
    level-6 descendants with it. Only the parts of the period that can produce a cut are sampled;
    the result per period is the number of removed level-6 nodes.

    :param k: Mean offspring.
    :param eps: Noise in [0, 1/2).
    :param samples: Number of periods.
    :param seed: Seed.
    :param chunk: Periods sampled per batch.
    :return: Removed level-6 descendants per period.
    :rtype: numpy.ndarray
    """
    if samples < 1:
        raise ParameterError(f"Need at least one sample, got {samples}")
    cut_chance = delta_of_eps(eps) * eps ** 2
    rng = stream(seed, 'periodic')
    removed = np.zeros(samples, dtype=np.float64)
    for start in range(0, samples, chunk):
        size = min(chunk, samples - start)
        removed[start:start + size] = _period_chunk(rng, k, cut_chance, size)
    logger.debug(f"Periodic process: {samples} periods, mean removal {removed.mean():.4f}")
    return removed


def _period_chunk(rng: np.random.Generator, k: float, cut_chance: float, size: int) -> np.ndarray:
    owner = np.arange(size)
    # levels 1 and 2; each node remembers its period
    for _ in range(2):
        counts = rng.poisson(k, size=owner.size)
        owner = np.repeat(owner, counts)
    third = rng.poisson(k, size=owner.size)
    third_owner = np.repeat(np.arange(owner.size), third)
    fourth = rng.poisson(k, size=third_owner.size)

    # level-2 node is GOOD when at least 3 of its level-3 children do not have exactly one child
    not_two = np.bincount(third_owner, weights=(fourth != 1), minlength=owner.size)
    good_level2 = not_two >= 3
    candidate = (fourth == 1) & good_level2[third_owner]
    candidate &= rng.random(candidate.size) < cut_chance
    hits = np.flatnonzero(candidate)
    if hits.size == 0:
        return np.zeros(size)

    # the single level-4 child: its children (level 5) and grandchildren (level 6)
    fifth = rng.poisson(k, size=hits.size)
    fifth_owner = np.repeat(np.arange(hits.size), fifth)
    sixth = rng.poisson(k, size=fifth_owner.size)
    good_level4 = np.bincount(fifth_owner, weights=(sixth != 1), minlength=hits.size) >= 3
    lost = np.bincount(fifth_owner, weights=sixth, minlength=hits.size) * good_level4
    return np.bincount(owner[third_owner[hits]], weights=lost, minlength=size)


def estimate_k_prime_sixth(k: float, eps: float, samples: int, seed: int) -> tuple[float, float]:
    """
    Control-variate estimate of (k')^6, the mean base-to-base offspring of the periodic process.

    The uncut period has exactly k^6 expected level-6 nodes, so the estimate is k^6 minus the
    sample mean of the removals.

    :return: (estimate, standard error).
    :rtype: tuple[float, float]
    """
    removed = sample_period_removals(k, eps, samples, seed)
    stderr = float(removed.std(ddof=1) / np.sqrt(samples)) if samples > 1 else float('nan')
    return float(k ** 6 - removed.mean()), stderr
