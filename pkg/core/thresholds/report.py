from typing import Optional

from pydantic import BaseModel, Field

from core.errors import ParameterError
from core.thresholds.separation import MIN_K, separation_bound
from core.thresholds.critical import eps_star, eps_star_asymptotic, ks_threshold


class ThresholdReport(BaseModel):
    """Every threshold known for one branching number."""
    k: float
    model: str
    eps_crit_ks: float
    eps_star: float = Field(gt=0, lt=0.5)
    q_star: float = Field(gt=0.5, le=1)
    p_star: float = Field(gt=0.5, le=1)
    eps_star_asymptotic: float
    eps: Optional[float] = None
    separation_bound: Optional[float] = None
    separation_constant: Optional[float] = None


def threshold_report(k: float, eps: float = None, model: str = 'regular') -> ThresholdReport:
    """
    Collect the thresholds for k; the separation bound is included when k >= 9 and ``eps`` is given
    below the recovery threshold.
    """
    critical = eps_star(k, model)
    bound = None
    if eps is not None and k >= MIN_K:
        try:
            bound = separation_bound(k, eps)
        except ParameterError:
            bound = None
    return ThresholdReport(k=k, model=model, eps_crit_ks=ks_threshold(k), eps_star=critical.eps_star,
                           q_star=critical.q_star, p_star=critical.p_star, eps_star_asymptotic=eps_star_asymptotic(k),
                           eps=eps, separation_bound=None if bound is None else bound.general,
                           separation_constant=None if bound is None else bound.constant)
