import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from core.errors import BelowThresholdError, NumericError, ParameterError
from core.thresholds.majority import majority_for

logger = logging.getLogger('app')

SCAN_POINTS = 1000
FIXED_POINT_GRID = 2000


def ks_threshold(k: float) -> float:
    """
    Kesten-Stigum critical noise (1 - 1/sqrt(k)) / 2.

    :raises BelowThresholdError: For k < 1; k = 1 gives 0.
    """
    if k < 1:
        raise BelowThresholdError(f"No noise level allows recovery with branching number {k} < 1")
    return 0.5 * (1 - 1 / math.sqrt(k))


def ks_possible(k: float, eps: float) -> bool:
    """Whether k (1 - 2 eps)^2 > 1."""
    return k * (1 - 2 * eps) ** 2 > 1


def graph_ks_possible(a: float, b: float) -> bool:
    """Whether (a - b)^2 > 2 (a + b), the graph form of the same condition."""
    return (a - b) ** 2 > 2 * (a + b)


@dataclass(frozen=True)
class CriticalNoise:
    """
    Critical point of recursive majority against the strong adversary.

    Attributes:
        eps_star: Largest noise with a non-trivial fixed point, 1 - 1 / max_q M(q) / q.
        q_star: Tangency point, the maximiser of M(q) / q.
        p_star: Limiting success probability at the critical noise, q_star / (1 - eps_star).
    """
    eps_star: float
    q_star: float
    p_star: float


def eps_star(k: float, model: str = 'regular') -> CriticalNoise:
    """
    Critical noise of recursive majority with k (or Poisson(k)) children.

    Scans M(q) / q on [1/2, 1] at 1000 points, refines the best bracket by golden-section search
    and polishes the tangency condition q M'(q) = M(q) with Brent's method.

    :param k: Number of children (k >= 3, regular) or mean (k > 1, Poisson).
    :param model: ``regular`` or ``poisson``.
    :return: Critical noise, tangency point and success probability.
    :rtype: CriticalNoise
    :raises NumericError: When the maximum sits on the end of the interval.
    """
    if model == 'regular' and (int(k) != k or k < 3):
        raise ParameterError(f"Regular critical noise needs an integer k >= 3, got {k}")
    if model == 'poisson' and k <= 1:
        raise ParameterError(f"Poisson critical noise needs k > 1, got {k}")
    M, slope = majority_for(model)

    def ratio(q):
        return M(k, q) / q

    grid = np.linspace(0.5, 1.0, SCAN_POINTS)
    values = np.array([ratio(q) for q in grid])
    best = int(np.argmax(values))
    if best == 0 or best == grid.size - 1 or values[best] <= 1:
        raise NumericError(f"No interior maximum of M(q)/q for k={k}")
    lo, mid, hi = grid[best - 1], grid[best], grid[best + 1]
    result = minimize_scalar(lambda q: -ratio(q), bracket=(lo, mid, hi), method='golden', tol=1e-10)
    q_star = float(result.x)

    def tangency(q):
        return q * slope(k, q) - M(k, q)

    if tangency(lo) > 0 > tangency(hi):
        q_star = brentq(tangency, lo, hi, xtol=1e-14)
    peak = ratio(q_star)
    critical = CriticalNoise(eps_star=1 - 1 / peak, q_star=q_star, p_star=q_star * peak)
    logger.debug(f"Critical noise for k={k} ({model}): {critical}")
    return critical


def eps_star_asymptotic(k: float) -> float:
    """Leading-order critical noise 1/2 - sqrt(log k / k) / 2."""
    if k <= 1:
        raise ParameterError(f"Asymptotic critical noise needs k > 1, got {k}")
    return 0.5 - 0.5 * math.sqrt(math.log(k) / k)


def recursion_iterates(k: float, eps: float, steps: int, model: str = 'regular') -> np.ndarray:
    """
    Iterates p_0 = 1, p_{t+1} = M(p_t (1 - eps)): the success probability of recursive majority at
    depth t against the opposite-path adversary.
    """
    if not 0 <= eps <= 1:
        raise ParameterError(f"Noise must lie in [0, 1], got {eps}")
    M, _ = majority_for(model)
    p = np.empty(steps + 1)
    p[0] = 1.0
    for t in range(steps):
        p[t + 1] = M(k, p[t] * (1 - eps))
    return p


def greatest_fixed_point(k: float, eps: float, model: str = 'regular') -> float:
    """
    Largest q in [1/2, 1] with M(q) = q / (1 - eps), or 0 when there is none.

    The iterates q_t = p_t (1 - eps) converge to it from q_0 = 1 - eps.
    """
    M, _ = majority_for(model)

    def gap(q):
        return M(k, q) * (1 - eps) - q

    grid = np.linspace(1.0, 0.5, FIXED_POINT_GRID)
    values = np.array([gap(q) for q in grid])
    crossing = np.flatnonzero(values >= 0)
    if crossing.size == 0:
        return 0.0
    first = int(crossing[0])
    if first == 0:
        return 1.0
    return float(brentq(gap, grid[first], grid[first - 1], xtol=1e-14))
