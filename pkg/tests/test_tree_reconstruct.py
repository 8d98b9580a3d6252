import math

import numpy as np
import pytest

from core.errors import CapacityError, ParameterError
from core.sbm import Marking
from core.thresholds import eps_star
from core.tree_model import (Tree, dist4_edge_noise, eased_edge_noise, flip_odd_levels, sample_dist4, sample_plain,
                             sample_regular, strong_adversary_opposite_path)
from core.tree_model.noise import uniform_edge_noise
from core.tree_reconstruct import (PosteriorModel, advantage_bound, estimators, exact_posterior, majority_plus_probability,
                                   majority_vote, map_advantage, path_products, recursive_majority,
                                   recursive_majority_plus_probability, success_probability)


def star(spins) -> Tree:
    return Tree.build([-1] + [0] * len(spins), [1] + list(spins))


class TestMajority:

    def test_clear_majority(self):
        assert majority_vote(star([1, 1, -1]), seed=0).spin == 1
        assert majority_vote(star([-1, -1, 1]), seed=0).spin == -1

    def test_ties_are_fair(self):
        answers = [majority_vote(star([1, -1]), seed).spin for seed in range(400)]
        assert abs(np.mean(answers)) <= 4 / math.sqrt(400)

    def test_extinct_tree_is_a_coin(self):
        t = Tree.build([-1, 0], [1, 1], leaf=[False, False])
        answers = {majority_vote(t, seed).spin for seed in range(50)}
        assert answers == {1, -1}

    @pytest.mark.slow
    def test_succeeds_deep_in_the_reconstruction_regime(self):
        trials = 300
        wins = sum(majority_vote(t, seed).spin == t.root_spin
                   for seed in range(trials) for t in [sample_plain(8, 0.05, 5, seed)])
        assert wins / trials >= 0.9


class TestRecursiveMajority:

    def test_children_majority(self):
        assert recursive_majority(star([1, 1, -1]), seed=0).spin == 1

    def test_root_leaf_reports_itself(self):
        t = Tree.build([-1], [-1], leaf=[True], height=0)
        assert recursive_majority(t, seed=3).spin == -1

    def test_childless_internal_node_is_a_coin(self):
        # node 2 is internal but childless; node 1 reports +, so the root ties half the time
        t = Tree.build([-1, 0, 0, 1], [1, 1, 1, 1])
        plus = recursive_majority_plus_probability(t)
        assert plus == pytest.approx(0.75)

    def test_spin_flip_equivariance(self):
        for seed in range(30):
            t = sample_plain(2, 0.3, 4, seed)
            if t.is_extinct:
                continue
            negated = t.with_spins(-t.spins)
            assert recursive_majority(negated, seed).spin == -recursive_majority(t, seed).spin
            assert majority_vote(negated, seed).spin == -majority_vote(t, seed).spin

    def test_dissortative_is_anti_majority(self):
        t = Tree.build([-1, 0, 0, 0], [1, -1, -1, 1])
        assert recursive_majority(t, seed=0, mode='dissort').spin == 1
        assert recursive_majority(flip_odd_levels(t), seed=0).spin == 1

    def test_plus_probabilities(self):
        assert majority_plus_probability(star([1, -1])) == 0.5
        assert majority_plus_probability(star([1, 1, -1])) == 1.0
        assert recursive_majority_plus_probability(star([-1, -1, 1])) == 0.0


class TestPosterior:

    def test_single_edge(self):
        estimate = exact_posterior(star([-1]), PosteriorModel('plain', 0.2))
        assert estimate.spin == -1
        assert estimate.confidence == pytest.approx(0.8)

    def test_noiseless(self):
        estimate = exact_posterior(star([1, 1]), PosteriorModel('plain', 0.0))
        assert (estimate.spin, estimate.confidence) == (1, 1.0)

    @pytest.mark.parametrize('c', [1, 3, 5])
    def test_star_all_plus(self, c):
        eps = 0.3
        estimate = exact_posterior(star([1] * c), PosteriorModel('plain', eps))
        assert estimate.spin == 1
        assert estimate.confidence == pytest.approx((1 - eps) ** c / ((1 - eps) ** c + eps ** c))

    def test_confidence_is_at_least_one_half(self):
        for seed in range(20):
            t = sample_plain(2, 0.3, 3, seed)
            assert exact_posterior(t, PosteriorModel('plain', 0.3)).confidence >= 0.5

    def test_extinct_tree(self):
        t = Tree.build([-1, 0], [1, 1], leaf=[False, False])
        assert exact_posterior(t, PosteriorModel('plain', 0.1)).confidence == 0.5

    def test_unknown_model(self):
        with pytest.raises(ParameterError):
            PosteriorModel('dist9', 0.1)

    def test_dist2_without_marked_nodes_matches_plain(self):
        t = Tree.build([-1, 0, 0, 1, 1, 2], [1, 1, -1, 1, -1, -1])
        spin_first = exact_posterior(t, PosteriorModel('dist2', 0.2))
        plain = exact_posterior(t, PosteriorModel('plain', 0.2))
        assert spin_first.spin == plain.spin
        assert spin_first.confidence == pytest.approx(plain.confidence)

    def test_dist2_capacity(self):
        t = sample_regular(3, 0.1, 4, seed=0)
        with pytest.raises(CapacityError):
            exact_posterior(t, PosteriorModel('dist2', 0.1))

    def test_dist4_marked_node_weakens_the_evidence(self):
        # node 1 is MARKED between the GOOD root and GOOD node 5
        parent = [-1, 0, 0, 0, 0, 1, 5, 5, 5]
        spins = [1] * 9
        markings = [Marking.GOOD, Marking.MARKED, 0, 0, 0, Marking.GOOD, 0, 0, 0]
        t = Tree.build(parent, spins, markings=markings, leaf=[False, False, True, True, True, False, True, True, True])
        plain = exact_posterior(t, PosteriorModel('plain', 0.2))
        topology_first = exact_posterior(t, PosteriorModel('dist4', 0.2))
        assert topology_first.spin == plain.spin == 1
        assert topology_first.confidence < plain.confidence

    def test_map_dominates_majority_estimators(self):
        checked = 0
        for seed in range(10):
            t = sample_dist4(2, 0.2, 2, seed)
            if t.is_extinct or t.leaves.size > 8:
                continue
            noise = dist4_edge_noise(t, 0.2)
            best = 0.5 * (1 + map_advantage(t, noise))
            assert best >= success_probability(t, noise, majority_plus_probability) - 1e-12
            assert best >= success_probability(t, noise, recursive_majority_plus_probability) - 1e-12
            checked += 1
        assert checked > 0

    def test_map_advantage_capacity(self):
        with pytest.raises(CapacityError):
            map_advantage(star([1] * 13), uniform_edge_noise(star([1] * 13), 0.1))


class TestAdvantageBound:

    def test_noiseless_edge(self):
        t = star([1])
        assert advantage_bound(t, uniform_edge_noise(t, 0.0)) == pytest.approx(math.sqrt(2))

    @pytest.mark.parametrize('c, eps', [(1, 0.1), (4, 0.2), (9, 0.3)])
    def test_star(self, c, eps):
        t = star([1] * c)
        assert advantage_bound(t, uniform_edge_noise(t, eps)) == pytest.approx(math.sqrt(2 * c) * (1 - 2 * eps))

    def test_pure_noise(self):
        t = sample_plain(2, 0.5, 3, seed=0)
        assert advantage_bound(t, uniform_edge_noise(t, 0.5)) == 0

    def test_path_products(self, small_tree):
        products = path_products(small_tree, uniform_edge_noise(small_tree, 0.25))
        assert products.tolist() == [1, 0.5, 0.5, 0.25, 0.25, 0.25, 0.25]

    def test_bound_holds_on_small_trees(self):
        checked = 0
        for seed in range(20):
            t = sample_dist4(2, 0.15, 2, seed)
            if t.is_extinct or t.leaves.size > 10:
                continue
            topology_first = dist4_edge_noise(t, 0.15)
            if topology_first.joint_root:
                continue
            for noise in (topology_first, eased_edge_noise(t, 0.15)):
                assert map_advantage(t, noise) <= advantage_bound(t, noise) + 1e-12
            checked += 1
        assert checked > 0


class TestRegistry:

    @pytest.mark.parametrize('slug', ['maj', 'recmaj', 'map'])
    def test_estimators_agree_on_a_clear_star(self, slug):
        assert estimators[slug](star([1, 1, 1]), 0, 0.1, 'plain', 'assort').spin == 1

    @pytest.mark.parametrize('slug', ['maj', 'recmaj', 'map'])
    def test_dissortative_estimators(self, slug):
        # depth-1 leaves disagree with the root in the dissortative model
        assert estimators[slug](star([-1, -1, -1]), 0, 0.9, 'plain', 'dissort').spin == 1


class TestAgainstAdversaries:

    @pytest.mark.slow
    def test_majority_on_plain_trees_with_five_children(self):
        trials = 500
        wins = sum(majority_vote(t, seed).spin == t.root_spin
                   for seed in range(trials) for t in [sample_plain(5, 0.05, 7, seed)])
        assert wins / trials >= 0.9

    @pytest.mark.slow
    def test_recursive_majority_survives_opposite_paths(self):
        k, eps, depth, trials = 5, 0.05, 7, 500
        wins = 0
        for seed in range(trials):
            t = strong_adversary_opposite_path(sample_regular(k, eps, depth, seed))
            wins += recursive_majority(t, seed).spin == t.root_spin
        rate = wins / trials
        stderr = math.sqrt(rate * (1 - rate) / trials)
        assert rate >= eps_star(k).p_star - 3 * stderr
