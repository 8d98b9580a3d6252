import math

import numpy as np
import pytest

from core.errors import BelowThresholdError, ParameterError
from core.thresholds import (bound_constant, conditional_mean, eps_star, eps_star_asymptotic, graph_ks_possible,
                             greatest_fixed_point, ks_possible, ks_threshold, majority_derivative, majority_fn,
                             majority_fn_poisson, majority_for, majority_slope, majority_slope_poisson,
                             poisson_race_tail_bound, recursion_iterates, semirandom_window, separation_bound,
                             threshold_report)


class TestKestenStigum:

    def test_values(self):
        assert ks_threshold(4) == pytest.approx(0.25)
        assert ks_threshold(1) == 0

    def test_below_one(self):
        with pytest.raises(BelowThresholdError):
            ks_threshold(0.5)

    def test_conditions(self):
        assert ks_possible(4, 0.2)
        assert not ks_possible(4, 0.25)
        assert graph_ks_possible(7, 1)
        assert not graph_ks_possible(6, 2)


class TestMajority:

    def test_two_voters_repeat_the_input(self):
        p = np.linspace(0, 1, 11)
        assert np.allclose(majority_fn(2, p), p)

    def test_fixed_points(self):
        assert majority_fn(5, np.array([0.0, 0.5, 1.0])).tolist() == pytest.approx([0, 0.5, 1])

    def test_three_voters(self):
        assert majority_fn(3, 0.7) == pytest.approx(3 * 0.49 - 2 * 0.343)
        assert majority_slope(3, 0.7) == pytest.approx(6 * 0.7 * 0.3)
        assert majority_derivative(3, 0.7) == pytest.approx(6 * 0.7 * 0.3)

    @pytest.mark.parametrize('k', [4, 6, 7])
    def test_slope_matches_derivative(self, k):
        assert majority_slope(k, 0.3) == pytest.approx(majority_derivative(k, 0.3), rel=1e-6)

    def test_bad_arguments(self):
        with pytest.raises(ParameterError):
            majority_fn(2.5, 0.3)
        with pytest.raises(ParameterError):
            majority_derivative(3, 1.2)
        with pytest.raises(ParameterError):
            majority_for('binomial')

    def test_poisson_race(self):
        assert majority_fn_poisson(3, 0.5) == pytest.approx(0.5)
        assert majority_fn_poisson(3, 1.0) == pytest.approx(1 - math.exp(-3) / 2)
        assert majority_fn_poisson(3, 0.0) == pytest.approx(math.exp(-3) / 2)

    def test_poisson_race_in_log_space(self):
        assert majority_fn_poisson(200, 0.6) >= 0.99
        assert majority_fn_poisson(200, 0.6) <= 1

    def test_poisson_slope(self):
        h = 1e-5
        numeric = (majority_fn_poisson(3, 0.7 + h) - majority_fn_poisson(3, 0.7 - h)) / (2 * h)
        assert majority_slope_poisson(3, 0.7) == pytest.approx(numeric, rel=1e-4)

    def test_tail_bound(self):
        assert 1 - majority_fn_poisson(10, 0.7) <= poisson_race_tail_bound(10, 0.2)
        with pytest.raises(ParameterError):
            poisson_race_tail_bound(10, 0.6)


class TestCriticalNoise:

    def test_three_children(self):
        critical = eps_star(3)
        assert critical.eps_star == pytest.approx(1 / 9, abs=1e-8)
        assert critical.q_star == pytest.approx(0.75, abs=1e-6)
        assert critical.p_star == pytest.approx(27 / 32, abs=1e-6)

    def test_eleven_children(self):
        critical = eps_star(11)
        assert critical.q_star == pytest.approx(0.683, abs=0.01)
        assert critical.eps_star < 0.25
        assert critical.eps_star < ks_threshold(11)

    def test_no_fixed_point_above_critical(self):
        assert greatest_fixed_point(11, 0.25) == 0
        assert greatest_fixed_point(3, 0.2) == 0

    def test_fixed_point_just_below_critical(self):
        for k in (3, 11):
            critical = eps_star(k)
            q = greatest_fixed_point(k, critical.eps_star - 1e-4)
            assert critical.q_star <= q <= critical.q_star + 0.03

    def test_noiseless_fixed_point(self):
        assert greatest_fixed_point(5, 0.0) == 1

    def test_iterates_converge_to_the_fixed_point(self):
        p = recursion_iterates(3, 0.05, 200)
        assert p[0] == 1
        assert p.size == 201
        assert p[-1] == pytest.approx(greatest_fixed_point(3, 0.05) / 0.95, abs=1e-8)

    def test_iterates_collapse_above_critical(self):
        assert recursion_iterates(3, 0.2, 200)[-1] < 0.5

    def test_iterate_noise_range(self):
        with pytest.raises(ParameterError):
            recursion_iterates(3, 1.5, 10)

    def test_asymptotic_law(self):
        k = 101
        scale = math.sqrt(math.log(k) / k)
        assert abs(eps_star(k).eps_star - eps_star_asymptotic(k)) / scale <= 0.35

    def test_asymptotic_value(self):
        assert eps_star_asymptotic(1000) == pytest.approx(0.4584, abs=1e-4)
        with pytest.raises(ParameterError):
            eps_star_asymptotic(1)

    def test_poisson_critical_noise(self):
        critical = eps_star(20, 'poisson')
        assert 0 < critical.eps_star < 0.5

    @pytest.mark.parametrize('k, model', [(2, 'regular'), (3.5, 'regular'), (1, 'poisson')])
    def test_invalid_branching(self, k, model):
        with pytest.raises(ParameterError):
            eps_star(k, model)


class TestSeparation:

    def test_conditional_mean(self):
        assert conditional_mean(4.0, lambda x: x >= 0) == pytest.approx(4.0)
        assert conditional_mean(4.0, lambda x: x == 2) == pytest.approx(2.0)

    def test_bound_constant(self):
        assert bound_constant(9) == pytest.approx(7.23, abs=0.02)
        assert bound_constant(20) < bound_constant(12) < bound_constant(9)

    def test_general_bound(self):
        bound = separation_bound(9, 0.3)
        assert bound.general == pytest.approx(bound.constant * 9 * 0.09)
        assert separation_bound(9, 0.32).general == pytest.approx(bound.general * (0.32 / 0.3) ** 2)

    def test_needs_nine_children(self):
        with pytest.raises(ParameterError):
            separation_bound(8, 0.1)
        with pytest.raises(ParameterError):
            semirandom_window(8)

    def test_needs_recoverable_noise(self):
        with pytest.raises(ParameterError):
            separation_bound(9, 0.34)

    def test_window_for_nine_children(self):
        window = semirandom_window(9)
        assert not window.empty
        assert window.eps_hi == pytest.approx(1 / 3)
        assert window.eps_hi - window.eps_lo < 1e-5


class TestReport:

    def test_three_children(self):
        report = threshold_report(3)
        assert report.eps_star == pytest.approx(1 / 9, abs=1e-8)
        assert report.eps_crit_ks == pytest.approx(ks_threshold(3))
        assert report.separation_bound is None

    def test_separation_fields(self):
        report = threshold_report(9, eps=0.3)
        assert report.separation_constant == pytest.approx(bound_constant(9))
        assert report.separation_bound > 0

    def test_separation_above_threshold_is_omitted(self):
        assert threshold_report(9, eps=0.4).separation_bound is None
