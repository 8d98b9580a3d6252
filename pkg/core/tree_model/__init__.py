from .tree import Tree, flip_odd_levels
from .noise import (EdgeNoise, cut_probability, d_plus_table, dist4_edge_noise, eased_edge_noise, eps_prime,
                    marked_path_same_spin, uniform_edge_noise)
from .sampling import (GoodnessRule, grow, sample_dist2, sample_dist4, sample_plain, sample_regular, tree_markings,
                       trim)
from .adversaries import (conjugate, cutting_adversary_majority_breaker, strong_adversary_asymmetric,
                          strong_adversary_opposite_path)
from .periodic import estimate_k_prime_sixth, sample_period_removals
from .initialize import adversaries, attacked_tree, dissortative_adversaries, samplers, sampling_noise
