import math

import numpy as np
import pytest
import scipy.sparse as sp
from scipy.optimize import minimize

from core.errors import CapacityError, ConvergenceError, InputError, ParameterError
from core.sbm import Graph, ModelParams, partial_recovery_score, sample_precursor, sample_spins
from core.sdp_recovery import (ChangeBudget, LambdaRule, MonotoneChange, SdpInstance, apply_monotone_change,
                               build_objective, check_monotone_change, cut_norm, dual_certificate, expected_objective,
                               project_box, project_psd, recovery_regime, round_solution, sample_monotone_change,
                               solve_sdp, transfer_envelope, validate_monotone_change)


def instance(B) -> SdpInstance:
    B = np.asarray(B, dtype=float)
    return SdpInstance(B=B, lam=0.0, n=B.shape[0])


def gram_oracle(B: np.ndarray) -> float:
    """Best <B, Z> over Gram matrices of three unit vectors, by grid search and a local polish."""

    def value(angles):
        a, b, c = angles
        z12, z13 = np.cos(a), np.cos(b)
        z23 = np.cos(a) * np.cos(b) + np.sin(a) * np.sin(b) * np.cos(c)
        return np.trace(B) + 2 * (B[0, 1] * z12 + B[0, 2] * z13 + B[1, 2] * z23)

    a, b, c = np.meshgrid(np.linspace(0, np.pi, 61), np.linspace(0, np.pi, 61), np.linspace(0, 2 * np.pi, 121),
                          indexing='ij')
    values = value((a, b, c))
    best = np.unravel_index(np.argmax(values), values.shape)
    start = np.array([a[best], b[best], c[best]])
    polished = minimize(lambda x: -value(x), start, method='Nelder-Mead', options={'xatol': 1e-10, 'fatol': 1e-12})
    return max(float(values[best]), -float(polished.fun))


class TestObjective:

    def test_identity_without_edges(self):
        g = Graph.from_edges(2, [], [1, -1])
        inst = build_objective(g, LambdaRule('explicit', value=0.0))
        assert np.array_equal(inst.B, np.eye(2))

    def test_single_edge(self):
        g = Graph.from_edges(2, [(0, 1)], [1, 1])
        inst = build_objective(g, LambdaRule('explicit', value=0.25))
        assert np.allclose(inst.B, np.full((2, 2), 0.75))

    def test_dissortative_objective(self):
        g = Graph.from_edges(2, [(0, 1)], [1, -1])
        inst = build_objective(g, LambdaRule('explicit', value=0.0), mode='dissort')
        assert np.array_equal(inst.B, np.array([[1.0, -1.0], [-1.0, 1.0]]))

    def test_single_node(self):
        with pytest.raises(InputError):
            build_objective(Graph.from_edges(1, [], [1]), LambdaRule('fixed'))

    def test_lambda_rules(self):
        params = ModelParams(n=100, a=6, b=2)
        assert LambdaRule.parse('model', params).resolve(100) == pytest.approx(0.04)
        assert LambdaRule.parse('0.3').resolve(100) == 0.3
        n = round(math.exp(10))
        assert LambdaRule.parse('fixed').resolve(n) == pytest.approx(10 / n, rel=1e-4)

    @pytest.mark.parametrize('text', ['model', 'lots'])
    def test_bad_lambda_rules(self, text):
        with pytest.raises(ParameterError):
            LambdaRule.parse(text)

    def test_lambda_shift_identity(self):
        params = ModelParams(n=80, a=8, b=2)
        g = sample_precursor(params, 3)
        lam, lam_prime = 0.05, math.log(80) / 80
        B = build_objective(g, LambdaRule('explicit', value=lam)).B
        B_prime = build_objective(g, LambdaRule('explicit', value=lam_prime)).B
        assert np.allclose(B - B_prime, (lam_prime - lam) * np.ones((80, 80)))
        R = expected_objective(params, g.spins, lam)
        R_prime = expected_objective(params, g.spins, lam_prime)
        assert np.allclose(B_prime - R_prime, B - R, atol=1e-12)


class TestSolver:

    def test_identity(self):
        sol = solve_sdp(instance(np.eye(2)))
        assert sol.value == pytest.approx(2, abs=1e-4)

    def test_all_three_quarters(self):
        sol = solve_sdp(instance(np.full((2, 2), 0.75)))
        assert sol.value == pytest.approx(3, abs=1e-4)
        assert np.allclose(sol.Z, np.ones((2, 2)), atol=1e-3)

    def test_negative_off_diagonal(self):
        sol = solve_sdp(instance([[1.0, -0.5], [-0.5, 1.0]]))
        assert np.allclose(sol.Z, np.array([[1.0, -1.0], [-1.0, 1.0]]), atol=1e-3)

    @pytest.mark.parametrize('seed', range(5))
    def test_random_three_by_three_matches_oracle(self, seed):
        rng = np.random.default_rng(seed)
        M = rng.normal(size=(3, 3))
        B = (M + M.T) / 2
        np.fill_diagonal(B, np.abs(np.diag(B)))
        sol = solve_sdp(instance(B))
        assert sol.value == pytest.approx(gram_oracle(B), abs=1e-4)

    def test_feasibility(self):
        params = ModelParams(n=60, a=10, b=2)
        g = sample_precursor(params, 1)
        sol = solve_sdp(build_objective(g, LambdaRule.parse('model', params)))
        assert np.linalg.eigvalsh(sol.Z)[0] >= -1e-6
        assert np.diag(sol.Z).max() <= 1 + 1e-6
        assert np.allclose(sol.Z, sol.Z.T)

    def test_budget_exhausted(self):
        g = sample_precursor(ModelParams(n=30, a=6, b=2), 0)
        with pytest.raises(ConvergenceError) as info:
            solve_sdp(build_objective(g, LambdaRule('fixed')), tol=1e-14, max_iter=2)
        assert info.value.iterations == 2
        assert info.value.primal_residual >= 0

    def test_projections(self):
        M = np.array([[2.0, 0.0], [0.0, -1.0]])
        assert np.allclose(project_psd(M), np.diag([2.0, 0.0]))
        assert np.allclose(project_box(np.array([[3.0, 1.0], [0.0, 0.5]])), np.array([[1.0, 0.5], [0.5, 0.5]]))

    @pytest.mark.slow
    def test_recovers_communities_with_strong_signal(self):
        params = ModelParams(n=200, a=20, b=2)
        g = sample_precursor(params, 2)
        sol = solve_sdp(build_objective(g, LambdaRule.parse('model', params)))
        assert partial_recovery_score(round_solution(sol).spins, g.spins) >= 0.9


class TestRounding:

    def test_rank_one(self):
        sigma = sample_spins(50, 1).astype(float)
        rounding = round_solution(np.outer(sigma, sigma))
        assert abs(int(rounding.spins @ sigma)) == 50
        assert not rounding.degenerate
        assert rounding.eigenvalue == pytest.approx(50)

    def test_identity_is_degenerate(self):
        rounding = round_solution(np.eye(6))
        assert rounding.degenerate
        assert set(np.unique(rounding.spins)) <= {-1, 1}

    def test_zero_entries_round_to_plus(self):
        assert round_solution(np.diag([2.0, 0.0])).spins[1] == 1

    def test_noisy_rank_one(self):
        n = 200
        sigma = sample_spins(n, 5).astype(float)
        rng = np.random.default_rng(0)
        noise = rng.normal(size=(n, n))
        noise = (noise + noise.T) / 2
        noise *= 0.1 / np.linalg.norm(noise, 2)
        rounding = round_solution(np.outer(sigma, sigma) + noise)
        assert partial_recovery_score(rounding.spins, sigma) >= 0.99

    def test_rejects_non_square(self):
        with pytest.raises(InputError):
            round_solution(np.ones((2, 3)))


class TestMonotoneChange:

    @pytest.fixture
    def graph(self) -> Graph:
        return sample_precursor(ModelParams(n=60, a=8, b=4), 7)

    def test_empty_budget(self, graph):
        change = sample_monotone_change(graph, graph.spins, ChangeBudget(), seed=0)
        assert change.S.nnz == 0
        assert validate_monotone_change(change, graph)

    def test_delete_cross(self, graph):
        change = sample_monotone_change(graph, graph.spins, ChangeBudget.parse('delete-cross'), seed=0)
        changed = apply_monotone_change(graph, change)
        edges = changed.edges()
        assert np.all(changed.spins[edges[:, 0]] == changed.spins[edges[:, 1]])
        assert change.additions == 0

    @pytest.mark.parametrize('text', ['independent:0.1', 'subset:0.5', 'delete-cross'])
    def test_sampled_changes_are_monotone(self, graph, text):
        budget = ChangeBudget.parse(text)
        sigma = graph.spins.astype(float)
        rng = np.random.default_rng(1)
        for seed in range(5):
            change = sample_monotone_change(graph, graph.spins, budget, seed)
            assert validate_monotone_change(change, graph)
            S = change.S.toarray().astype(float)
            assert sigma @ S @ sigma == change.S.nnz
            for _ in range(20):
                V = rng.normal(size=(graph.n, 3))
                V /= np.linalg.norm(V, axis=1, keepdims=True)
                assert np.vdot(S, V @ V.T) <= change.S.nnz + 1e-9

    def test_adding_a_cross_pair_is_rejected(self):
        g = Graph.from_edges(3, [], [1, -1, 1])
        S = sp.csr_matrix(np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]], dtype=np.int8))
        change = MonotoneChange(S=S, truth=g.spins)
        assert not validate_monotone_change(change, g)
        with pytest.raises(InputError):
            check_monotone_change(change, g)

    def test_objective_moves_by_the_change_size(self, graph):
        change = sample_monotone_change(graph, graph.spins, ChangeBudget.parse('independent:0.2'), seed=4)
        rule = LambdaRule('explicit', value=0.1)
        B = build_objective(graph, rule).B
        B_changed = build_objective(apply_monotone_change(graph, change), rule).B
        sigma = graph.spins.astype(float)
        truth_matrix = np.outer(sigma, sigma)
        assert np.vdot(B_changed, truth_matrix) - np.vdot(B, truth_matrix) == pytest.approx(change.S.nnz)

    def test_budget_parsing(self):
        assert ChangeBudget.parse('independent:0.3').probability == 0.3
        assert ChangeBudget.parse('subset:0.5').fraction == 0.5
        with pytest.raises(ParameterError):
            ChangeBudget.parse('everything')
        with pytest.raises(ParameterError):
            ChangeBudget.parse('independent:2')


class TestCertificate:

    def test_balanced_communities(self):
        n = 40
        truth = np.array([1, -1] * (n // 2))
        params = ModelParams(n=n, a=12, b=2)
        report = dual_certificate(Graph.from_edges(n, [], truth), truth, params)
        assert np.allclose(report.gamma, 5)

    def test_annihilates_truth(self):
        params = ModelParams(n=500, a=10, b=3)
        truth = sample_spins(500, 2)
        report = dual_certificate(Graph.from_edges(500, [], truth), truth, params)
        assert report.annihilates

    @pytest.mark.slow
    def test_passes_with_strong_signal(self):
        params = ModelParams(n=1000, a=30, b=5)
        for seed in range(20):
            g = sample_precursor(params, seed)
            assert dual_certificate(g, g.spins, params).valid

    def test_dissortative_certificate(self):
        params = ModelParams(n=300, a=5, b=30, mode='dissort')
        g = sample_precursor(params, 1)
        report = dual_certificate(g, g.spins, params)
        assert report.annihilates
        assert report.valid

    def test_size_mismatch(self):
        truth = np.array([1, -1, 1])
        with pytest.raises(InputError):
            dual_certificate(Graph.from_edges(3, [], truth), truth, ModelParams(n=4, a=2, b=1))


class TestCutNorm:

    def test_scalar(self):
        assert cut_norm([[1.0]]) == 1

    def test_two_by_two(self):
        assert cut_norm([[1.0, -1.0], [-1.0, 1.0]]) == 4

    def test_zero(self):
        assert cut_norm(np.zeros((5, 5))) == 0

    def test_capacity(self):
        with pytest.raises(CapacityError):
            cut_norm(np.ones((3, 25)))

    def test_unknown_mode(self):
        with pytest.raises(ParameterError):
            cut_norm(np.ones((2, 2)), mode='guess')

    def test_heuristic_is_a_lower_bound(self):
        rng = np.random.default_rng(3)
        M = rng.normal(size=(10, 10))
        exact = cut_norm(M)
        heuristic = cut_norm(M, mode='heuristic', seed=1)
        assert heuristic <= exact + 1e-9

    def test_heuristic_is_exact_on_rank_one(self):
        rng = np.random.default_rng(4)
        u, v = rng.normal(size=8), rng.normal(size=12)
        M = np.outer(u, v)
        assert cut_norm(M, mode='heuristic') == pytest.approx(np.abs(u).sum() * np.abs(v).sum())
        assert cut_norm(M) == pytest.approx(np.abs(u).sum() * np.abs(v).sum())


class TestEnvelope:

    def test_transfer_envelope(self):
        assert transfer_envelope(1.0, 100, 5, 1) == pytest.approx(1e4 * 2 * 1.783 * 100 / 4)

    def test_envelope_without_signal(self):
        with pytest.raises(ParameterError):
            transfer_envelope(1.0, 100, 3, 3)

    def test_recovery_regime(self):
        assert not recovery_regime(30, 5, 0.6)
        assert recovery_regime(1e6, 0, 0.6)
        with pytest.raises(ParameterError):
            recovery_regime(30, 5, 1.0)
