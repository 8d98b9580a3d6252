import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import poisson

from core.errors import ParameterError
from core.graph_adversary.adversary import delta_of_eps
from core.thresholds.critical import ks_possible, ks_threshold

TAIL = 1e-12
MIN_K = 9


def _support(mu: float) -> np.ndarray:
    return np.arange(int(poisson.isf(TAIL, mu)) + 2)


def conditional_mean(mu: float, keep) -> float:
    """
    E[X | X in S] = E[X 1_S] / P(S) for X ~ Poisson(mu), summed until the tail drops below 1e-12.

    :param mu: Poisson mean.
    :param keep: Predicate on a numpy array of counts selecting S.
    """
    x = _support(mu)
    mass = poisson.pmf(x, mu) * keep(x)
    return float(np.sum(x * mass) / np.sum(mass))


def bound_constant(k: float) -> float:
    """
    K(k) = k^2 p P(Pois(k(1 - p)) >= 3)^2 (k p + E[Pois(k(1 - p)) | >= 3] E[Pois(k) | != 1]),
    with p = P(Pois(k) = 1).
    """
    p = k * math.exp(-k)
    rest = k * (1 - p)
    good = poisson.sf(2, rest)
    grown = conditional_mean(rest, lambda x: x >= 3)
    not_single = conditional_mean(k, lambda x: x != 1)
    return k ** 2 * p * good ** 2 * (k * p + grown * not_single)


@dataclass(frozen=True)
class SeparationBound:
    """
    Lower bound on k^6 - k'^6, the expected leaves removed per six-level period.

    Attributes:
        general: k^3 p delta eps^2 P(...)^2 (...), valid for every eps.
        constant: K(k), the bound when delta eps^2 >= 1/k.
    """
    general: float
    constant: float


def separation_bound(k: float, eps: float) -> SeparationBound:
    """
    Expected number of depth-six descendants the graph adversary removes below a base node.

    :param k: Mean offspring, at least 9.
    :param eps: Noise with k (1 - 2 eps)^2 > 1.
    :return: The general bound and K(k).
    :rtype: SeparationBound
    """
    if k < MIN_K:
        raise ParameterError(f"The separation bound needs k >= {MIN_K}, got {k}")
    if not ks_possible(k, eps):
        raise ParameterError(f"Noise {eps} is at or above the recovery threshold for k={k}")
    constant = bound_constant(k)
    return SeparationBound(general=constant * k * delta_of_eps(eps) * eps ** 2, constant=constant)


appendix_a_bound = separation_bound


@dataclass(frozen=True)
class SemirandomWindow:
    """
    Noise interval where recovery is possible in the random tree but impossible once the adversary
    cuts: (k^6 - K(k))^(1/6) < (1 - 2 eps)^-2 < k.
    """
    eps_lo: float
    eps_hi: float

    @property
    def empty(self) -> bool:
        return not self.eps_lo < self.eps_hi


def semirandom_window(k: float) -> SemirandomWindow:
    """
    Invert both inequalities of the separation window to an explicit noise interval.

    :param k: Mean offspring, at least 9.
    :return: The window; check ``empty`` before use.
    :rtype: SemirandomWindow
    """
    if k < MIN_K:
        raise ParameterError(f"The separation window needs k >= {MIN_K}, got {k}")
    constant = bound_constant(k)
    if constant >= k ** 6:
        raise ParameterError(f"K({k}) = {constant} exceeds k^6")
    # (k^6 - K)^(1/6) computed as k (1 - K/k^6)^(1/6) to keep the small gap accurate
    level = k * math.exp(math.log1p(-constant / k ** 6) / 6)
    return SemirandomWindow(eps_lo=0.5 * (1 - 1 / math.sqrt(level)), eps_hi=ks_threshold(k))
