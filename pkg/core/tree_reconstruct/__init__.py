from .estimators import (RootEstimate, majority_plus_probability, majority_vote, recursive_majority,
                         recursive_majority_plus_probability)
from .posterior import (PosteriorModel, dist2_root_log_likelihood, exact_posterior, map_advantage,
                        root_log_likelihood, success_probability)
from .advantage import advantage_bound, path_products
from .initialize import estimators
