import logging

import numpy as np

from core.errors import ParameterError
from core.graph_adversary import apply_adversary, assign_markings
from core.harness import ExperimentSpec, load_spec, run_experiment, write_rows
from core.harness.runners import TREE_FIELDS, run_tree_sweep
from core.random_streams import derive_seed
from core.sbm import ModelParams, Mode, partial_recovery_score, read_graph, read_params, sample_precursor, \
    write_graph, write_params
from core.sdp_recovery import (ChangeBudget, LambdaRule, apply_monotone_change, build_objective, dual_certificate,
                               round_solution, sample_monotone_change, solve_sdp)
from core.thresholds import ThresholdReport, threshold_report
from core.tree_model import attacked_tree

logger = logging.getLogger('app')

TREE_SIM_FIELDS = ['trial', 'seed', 'root_spin', 'size', 'leaves', 'leaf_sum', 'marked', 'extinct']
SDP_FIELDS = ['n', 'lambda', 'objective', 'iterations', 'primal_residual', 'dual_residual', 'score', 'degenerate',
              'additions', 'deletions', 'gamma_nonnegative', 'annihilates', 'psd', 'min_eigenvalue']


def gen(args, config: dict) -> int:
    params = ModelParams(args.n, args.a, args.b, args.mode)
    g = sample_precursor(params, args.seed)
    write_graph(g, args.out)
    write_params(params, args.out, args.seed)
    logger.info(f"Wrote graph with {g.n} nodes and {g.edge_count} edges to {args.out}")
    return 0


def adversary(args, config: dict) -> int:
    g = read_graph(args.source)
    params = read_params(args.source)
    if args.mode is not None:
        params = ModelParams(params.n, params.a, params.b, args.mode)
    if not g.is_marked:
        g = assign_markings(g)
    outcome = apply_adversary(g, params, args.seed)
    write_graph(outcome.graph, args.out)
    write_params(params, args.out, args.seed)
    print(f"m={outcome.m} w={outcome.w} delta={outcome.delta:.12g}")
    return 0


def _tree(args, trial: int):
    seed = derive_seed(args.seed, 'trial', trial)
    return seed, attacked_tree(args.dist, args.adversary, args.k, args.eps, args.depth, seed, Mode(args.mode),
                               asym=args.asym, sign=args.sign)


def tree_sim(args, config: dict) -> int:
    rows = []
    for trial in range(args.trials):
        seed, t = _tree(args, trial)
        rows.append({'trial': trial, 'seed': seed, 'root_spin': t.root_spin, 'size': t.size,
                     'leaves': int(t.leaf.sum()), 'leaf_sum': int(t.leaf_spins.astype(np.int64).sum()),
                     'marked': int(t.marked().sum()), 'extinct': int(t.is_extinct)})
    write_rows(args.out, TREE_SIM_FIELDS, rows)
    return 0


def tree_recover(args, config: dict) -> int:
    spec = ExperimentSpec(kind='tree-threshold-sweep', trials=args.trials, seed=args.seed, k=[args.k], eps=[args.eps],
                          depth=[args.depth], sampler=[args.dist], adversary=[args.adversary], algo=[args.algo],
                          mode=[args.mode], asym=args.asym, sign=args.sign)
    write_rows(args.out, TREE_FIELDS, run_tree_sweep(spec))
    return 0


def sdp(args, config: dict) -> int:
    g = read_graph(args.source)
    params = read_params(args.source)
    truth = g.spins
    budget = ChangeBudget.parse(args.change_budget)
    change = None
    if budget.rule != 'none':
        change = sample_monotone_change(g, truth, budget, args.seed, params.mode)
        g = apply_monotone_change(g, change)

    solver = config.get('solver', {})
    instance = build_objective(g, LambdaRule.parse(args.lambda_rule, params), params.mode)
    tol = args.tol if args.tol is not None else solver.get('tol_per_node', 1e-6) * g.n
    solution = solve_sdp(instance, tol=tol, max_iter=args.max_iter or solver.get('max_iter', 5000),
                         rho=solver.get('rho', 1.0))
    rounding = round_solution(solution)
    certificate = dual_certificate(g, truth, params)
    row = {'n': g.n, 'lambda': instance.lam, 'objective': solution.value, 'iterations': solution.iterations,
           'primal_residual': solution.primal_residual, 'dual_residual': solution.dual_residual,
           'score': partial_recovery_score(rounding.spins, truth), 'degenerate': int(rounding.degenerate),
           'additions': change.additions if change else 0, 'deletions': change.deletions if change else 0,
           'gamma_nonnegative': int(certificate.nonnegative), 'annihilates': int(certificate.annihilates),
           'psd': int(certificate.psd), 'min_eigenvalue': certificate.min_eigenvalue}
    write_rows(args.out, SDP_FIELDS, [row])
    return 0


def thresholds(args, config: dict) -> int:
    rows = [threshold_report(k, args.eps, args.model).model_dump() for k in args.k]
    write_rows(args.out, list(ThresholdReport.model_fields), rows)
    return 0


def experiment(args, config: dict) -> int:
    spec = load_spec(args.spec)
    out_dir = args.out or spec.out
    if out_dir is None:
        raise ParameterError("Experiment needs an output directory (--out or out = DIR)")
    harness = config.get('harness', {})
    if spec.kind in ('graph-recovery', 'sdp-robustness', 'relative-spin') and 'pairs' not in spec.model_fields_set:
        spec = spec.model_copy(update={'pairs': harness.get('pairs', spec.pairs)})
    run_experiment(spec, out_dir, solver=config.get('solver'), cobweb_grid=harness.get('cobweb_grid', 200))
    return 0


def serve(args, config: dict) -> int:
    import uvicorn

    logger.info("Starting application...")
    uvicorn.run(app='api.v0_1.app:app', host=config['uvicorn']['host'], port=config['uvicorn']['port'],
                reload=config['uvicorn'].get('reload', False))
    return 0


# Sub-command name -> handler(args, config) returning an exit status
commands = {
    'gen': gen,
    'adversary': adversary,
    'tree-sim': tree_sim,
    'tree-recover': tree_recover,
    'sdp': sdp,
    'thresholds': thresholds,
    'experiment': experiment,
    'serve': serve,
}
