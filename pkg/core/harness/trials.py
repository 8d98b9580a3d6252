"""Single-trial functions; module level so the process pool can pickle them."""
import logging

import numpy as np

from core.errors import CapacityError, ConvergenceError, ParameterError
from core.graph_adversary import apply_adversary, assign_markings
from core.random_streams import stream
from core.sbm import ModelParams, Mode, partial_recovery_score, relative_spin_accuracy, relative_spin_from_score, \
    sample_precursor
from core.sdp_recovery import (ChangeBudget, LambdaRule, apply_monotone_change, build_objective, cut_norm,
                               expected_objective, round_solution, sample_monotone_change, solve_sdp,
                               transfer_envelope)
from core.sdp_recovery.solver import MAX_ITER, RHO, TOL_PER_NODE
from core.tree_model import attacked_tree
from core.tree_reconstruct import estimators

logger = logging.getLogger('harness')

GRAPH_ADVERSARIES = ('none', 'dist1')
GRAPH_ALGORITHMS = ('sdp', 'oracle')
POSTERIOR_MODELS = {'plain': 'plain', 'regular': 'plain', 'd2': 'dist4', 'd3': 'dist4', 'd4': 'dist4'}


def tree_trial(task: tuple) -> dict:
    """
    Sample a tree, attack it, estimate the root.

    :param task: (point, seed) with point keys k, eps, depth, sampler, adversary, algo, mode.
    :return: success (1, 0, or 1/2 for a leafless tree), the leaf count and a skipped flag; a
        trial whose tree is too large for the estimator is skipped with success NaN.
    """
    point, seed = task
    mode = Mode(point['mode'])
    t = attacked_tree(point['sampler'], point['adversary'], point['k'], point['eps'], point['depth'], seed, mode,
                      asym=point.get('asym', 0.0), sign=point.get('sign', 1))
    if point['algo'] not in estimators:
        raise ParameterError(f"Unknown tree estimator '{point['algo']}'")
    if t.is_extinct:
        return {'success': 0.5, 'leaves': float(t.leaf.sum()), 'skipped': 0.0}
    try:
        estimate = estimators[point['algo']](t, seed, point['eps'], POSTERIOR_MODELS[point['sampler']], mode)
    except CapacityError as e:
        logger.warning(f"Trial with seed {seed} skipped: {e}")
        return {'success': float('nan'), 'leaves': float(t.leaf.sum()), 'skipped': 1.0}
    return {'success': 1.0 if estimate.spin == t.root_spin else 0.0, 'leaves': float(t.leaf.sum()), 'skipped': 0.0}


def _observed_graph(point: dict, seed: int):
    params = ModelParams(point['n'], point['a'], point['b'], point['mode'])
    g = sample_precursor(params, seed)
    if point['adversary'] not in GRAPH_ADVERSARIES:
        raise ParameterError(f"Unknown graph adversary '{point['adversary']}'")
    observed = g
    if point['adversary'] == 'dist1':
        observed = apply_adversary(assign_markings(g), params, seed).graph
    return params, g.spins, observed


def _solve(instance, settings: dict):
    tol = settings.get('tol_per_node', TOL_PER_NODE) * instance.n
    return solve_sdp(instance, tol=tol, max_iter=settings.get('max_iter', MAX_ITER), rho=settings.get('rho', RHO))


def _random_pairs(n: int, count: int, seed: int) -> np.ndarray:
    rng = stream(seed, 'pairs')
    u = rng.integers(0, n, size=count)
    v = (u + rng.integers(1, n, size=count)) % n
    return np.column_stack([u, v])


def graph_trial(task: tuple) -> dict:
    """
    Sample a graph, optionally run the cutting adversary and a monotone change, then recover.

    :param task: (point, seed, options) with point keys n, a, b, adversary, budget, mode, algo and
        options lambda_rule, pairs and the solver settings.
    :return: score, relative-spin accuracies, iterations and a converged flag.
    """
    point, seed, options = task
    params, truth, observed = _observed_graph(point, seed)
    mode = Mode(point['mode'])
    budget = ChangeBudget.parse(point['budget'])
    if budget.rule != 'none':
        change = sample_monotone_change(observed, truth, budget, seed, mode)
        observed = apply_monotone_change(observed, change)

    iterations = 0.0
    if point['algo'] == 'oracle':
        spins = truth
    elif point['algo'] == 'sdp':
        instance = build_objective(observed, LambdaRule.parse(options['lambda_rule'], params), mode)
        try:
            solution = _solve(instance, options['solver'])
        except ConvergenceError as e:
            return {'converged': 0.0, 'score': float('nan'), 'relative_spin': float('nan'),
                    'relative_spin_derived': float('nan'), 'iterations': float(e.iterations)}
        spins = round_solution(solution).spins
        iterations = float(solution.iterations)
    else:
        raise ParameterError(f"Unknown graph algorithm '{point['algo']}'")

    score = partial_recovery_score(spins, truth)
    pairs = _random_pairs(params.n, options['pairs'], seed)
    return {'converged': 1.0, 'score': score, 'relative_spin': relative_spin_accuracy(spins, truth, pairs),
            'relative_spin_derived': relative_spin_from_score(score), 'iterations': iterations}


def robustness_trial(task: tuple) -> dict:
    """
    Solve before and after a monotone change and compare the changed solution with the
    envelope computed from the unchanged objective's perturbation size.
    """
    point, seed, options = task
    params, truth, observed = _observed_graph(point, seed)
    mode = Mode(point['mode'])
    rule = LambdaRule.parse(options['lambda_rule'], params)
    try:
        instance = build_objective(observed, rule, mode)
        before = _solve(instance, options['solver'])
        change = sample_monotone_change(observed, truth, ChangeBudget.parse(point['budget']), seed, mode)
        after = _solve(build_objective(apply_monotone_change(observed, change), rule, mode), options['solver'])
    except ConvergenceError:
        return {'converged': 0.0, 'score': float('nan'), 'score_changed': float('nan'), 'distance': float('nan'),
                'envelope': float('nan'), 'within': float('nan')}

    sigma = truth.astype(np.float64)
    alpha = cut_norm(instance.B - expected_objective(params, truth, instance.lam), 'heuristic', seed=seed)
    envelope = transfer_envelope(alpha, params.n, params.a, params.b)
    distance = float(np.sum((np.outer(sigma, sigma) - after.Z) ** 2))
    return {'converged': 1.0, 'score': partial_recovery_score(round_solution(before).spins, truth),
            'score_changed': partial_recovery_score(round_solution(after).spins, truth), 'distance': distance,
            'envelope': envelope, 'within': float(distance <= envelope)}
