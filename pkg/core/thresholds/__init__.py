from .majority import (majority_derivative, majority_fn, majority_fn_poisson, majority_for, majority_slope,
                       majority_slope_poisson, poisson_race_tail_bound)
from .critical import (CriticalNoise, eps_star, eps_star_asymptotic, graph_ks_possible, greatest_fixed_point,
                       ks_possible, ks_threshold, recursion_iterates)
from .separation import (SemirandomWindow, SeparationBound, appendix_a_bound, bound_constant, conditional_mean,
                         semirandom_window, separation_bound)
from .report import ThresholdReport, threshold_report
