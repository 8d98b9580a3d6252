import math

import numpy as np
from scipy.special import logsumexp
from scipy.stats import binom, poisson

from core.errors import ParameterError

TAIL = 1e-12
LOG_SPACE_ABOVE = 50
STEP = 1e-6


def _check_regular(k):
    if int(k) != k or k < 1:
        raise ParameterError(f"Regular majority needs a positive integer number of voters, got {k}")
    return int(k)


def majority_fn(k: int, p):
    """
    Probability that a majority of k voters says yes when each does independently with
    probability p; ties are broken by a fair coin.

    Written as (1 + P(X > k/2) - P(X < k/2)) / 2 for X ~ Binomial(k, p), which keeps
    M(0) = 0, M(1/2) = 1/2 and M(1) = 1 exact.

    :param k: Number of voters.
    :param p: Yes probability, scalar or array.
    :return: Majority probability, same shape as ``p``.
    """
    k = _check_regular(k)
    p = np.asarray(p, dtype=np.float64)
    half = k // 2
    value = 0.5 * (1 + binom.sf(half, k, p) - binom.sf(half, k, 1 - p))
    return float(value) if value.ndim == 0 else value


def majority_slope(k: int, p):
    """Exact derivative of :func:`majority_fn` in p, valid for odd and even k."""
    k = _check_regular(k)
    p = np.asarray(p, dtype=np.float64)
    half = k // 2
    value = 0.5 * k * (binom.pmf(half, k - 1, p) + binom.pmf(half, k - 1, 1 - p))
    return float(value) if value.ndim == 0 else value


def majority_derivative(k: int, q: float) -> float:
    """
    Derivative of the regular majority function.

    Odd k uses k C(k-1, (k-1)/2) (q (1 - q))^((k-1)/2); even k a central difference with step 1e-6
    (one-sided at the ends of [0, 1]).
    """
    k = _check_regular(k)
    if not 0 <= q <= 1:
        raise ParameterError(f"Probability must lie in [0, 1], got {q}")
    if k % 2 == 1:
        half = (k - 1) // 2
        return k * math.comb(k - 1, half) * (q * (1 - q)) ** half
    lo, hi = max(q - STEP, 0.0), min(q + STEP, 1.0)
    return (majority_fn(k, hi) - majority_fn(k, lo)) / (hi - lo)


def _beats(mu_x: float, mu_y: float) -> float:
    # P(X > Y) for independent Poisson X, Y, summed over Y up to a 1e-12 tail
    if mu_x == 0:
        return 0.0
    if mu_y == 0:
        return -math.expm1(-mu_x)
    y = np.arange(int(poisson.isf(TAIL, mu_y)) + 2)
    if mu_x + mu_y > LOG_SPACE_ABOVE:
        return float(np.exp(logsumexp(poisson.logpmf(y, mu_y) + poisson.logsf(y, mu_x))))
    return float(np.sum(poisson.pmf(y, mu_y) * poisson.sf(y, mu_x)))


def majority_fn_poisson(k: float, q: float) -> float:
    """
    Poisson race P(Pois(kq) > Pois(k(1 - q))) + P(tie) / 2.

    This is the majority function of a Poisson(k) number of voters; with no voters the coin decides.

    :param k: Mean number of voters.
    :param q: Yes probability.
    :return: Majority probability.
    :rtype: float
    """
    if k <= 0:
        raise ParameterError(f"Mean number of voters must be positive, got {k}")
    if not 0 <= q <= 1:
        raise ParameterError(f"Probability must lie in [0, 1], got {q}")
    yes, no = k * q, k * (1 - q)
    return 0.5 * (1 + _beats(yes, no) - _beats(no, yes))


def majority_slope_poisson(k: float, q: float) -> float:
    """Derivative in q of :func:`majority_fn_poisson`: the Poisson(k) mixture of regular slopes."""
    voters = np.arange(1, int(poisson.isf(TAIL, k)) + 2)
    weights = poisson.pmf(voters, k)
    return float(sum(w * majority_slope(int(v), q) for v, w in zip(voters, weights)))


def poisson_race_tail_bound(k: float, nu: float) -> float:
    """Chernoff bound exp(-k (1 - sqrt(1 - 4 nu^2))) on 1 - M(1/2 + nu) for Poisson(k) voters."""
    if not 0 <= nu <= 0.5:
        raise ParameterError(f"Bias must lie in [0, 1/2], got {nu}")
    return math.exp(-k * (1 - math.sqrt(1 - 4 * nu ** 2)))


def majority_for(model: str):
    """(M, M') pair for ``regular`` or ``poisson`` voters."""
    if model == 'regular':
        return majority_fn, majority_slope
    if model == 'poisson':
        return majority_fn_poisson, majority_slope_poisson
    raise ParameterError(f"Unknown voter model '{model}'")
