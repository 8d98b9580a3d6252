import math

import pytest

from core.errors import InputError, ParameterError, RunError
from core.harness import (CsvSink, ExperimentSpec, format_value, load_spec, parse_spec, point_label,
                          run_appendix_a_check, run_cobweb, run_experiment, run_graph_recovery, run_relative_spin,
                          run_sdp_robustness, run_separation_check, run_trials, run_tree_sweep, trial_seeds,
                          worker_count, write_rows)
from core.harness.trials import tree_trial
from core.sbm import Mode
from core.thresholds import appendix_a_bound, recursion_iterates, separation_bound

SWEEP = """
# two noise levels, one tree law
kind = tree-threshold-sweep
trials = 20
seed = 7
k = 2
eps = 0.05, 0.3   # grid
depth = 3
algo = maj, recmaj
"""


def _lines(path) -> list[str]:
    with open(path) as f:
        return f.read().splitlines()


class TestExperimentFormat:

    def test_parse(self):
        spec = parse_spec(SWEEP)
        assert spec.kind == 'tree-threshold-sweep'
        assert (spec.trials, spec.seed) == (20, 7)
        assert spec.eps == [0.05, 0.3]
        assert spec.algo == ['maj', 'recmaj']
        assert spec.mode == [Mode.ASSORTATIVE]

    def test_grid_order(self):
        points = parse_spec(SWEEP).grid('eps', 'algo')
        assert [(p['eps'], p['algo']) for p in points] == [(0.05, 'maj'), (0.05, 'recmaj'), (0.3, 'maj'),
                                                          (0.3, 'recmaj')]

    def test_grid_defaults(self):
        spec = ExperimentSpec(kind='graph-recovery', trials=1, seed=0)
        assert spec.grid('n', 'algo', algo=['sdp']) == [{'n': 200, 'algo': 'sdp'}]

    def test_dashes_in_keys(self):
        assert parse_spec("kind = cobweb\ntrials = 1\nseed = 0\nlambda-rule = fixed\n").lambda_rule == 'fixed'

    @pytest.mark.parametrize('text', [
        "kind = cobweb\ntrials = 1\nseed = 0\nseed = 1\n",
        "kind = cobweb\ntrials = 1\nseed = 0\ncolour = red\n",
        "kind = cobweb\ntrials = 0\nseed = 0\n",
        "kind = cobweb\ntrials = 1\nseed\n",
        "kind = sweep\ntrials = 1\nseed = 0\n",
        "kind = cobweb\ntrials = 1\nseed = 0\neps = 1.5\n",
        "kind = cobweb\ntrials = 1\nseed = 0\nsign = 2\n",
    ])
    def test_rejects(self, text):
        with pytest.raises(InputError):
            parse_spec(text)

    def test_load_missing(self, tmp_path):
        with pytest.raises(InputError):
            load_spec(str(tmp_path / 'absent.txt'))


class TestRecords:

    def test_format_value(self):
        assert format_value(0.1) == '0.1'
        assert format_value(1 / 3) == '0.333333333333'
        assert format_value(Mode.DISSORTATIVE) == 'dissort'
        assert format_value(None) == ''
        assert format_value(3) == '3'

    def test_point_label(self):
        assert point_label({'k': 3.0, 'eps': 0.1, 'algo': 'maj'}) == 'k=3;eps=0.1;algo=maj'

    def test_sink(self, tmp_path):
        path = tmp_path / 'nested' / 'out.csv'
        assert write_rows(str(path), ['a', 'b'], [{'a': 1, 'b': 0.5}, {'a': 2}]) == 2
        assert _lines(path) == ['a,b', '1,0.5', '2,']

    def test_stdout(self, capsys):
        write_rows('-', ['x'], [{'x': 1.25}])
        assert capsys.readouterr().out == "x\n1.25\n"

    def test_unwritable_path(self, tmp_path):
        with pytest.raises(RunError) as info:
            with CsvSink(str(tmp_path), ['a']):
                pass
        assert info.value.rows_written == 0


class TestPool:

    def test_worker_count(self, monkeypatch):
        monkeypatch.delenv('SBM_WORKERS', raising=False)
        assert worker_count() == 1
        monkeypatch.setenv('SBM_WORKERS', '3')
        assert worker_count() == 3

    @pytest.mark.parametrize('value', ['0', 'many'])
    def test_bad_worker_count(self, monkeypatch, value):
        monkeypatch.setenv('SBM_WORKERS', value)
        with pytest.raises(ParameterError):
            worker_count()

    def test_pool_preserves_order(self):
        point = {'k': 2, 'eps': 0.2, 'depth': 3, 'sampler': 'plain', 'adversary': 'none', 'algo': 'maj',
                 'mode': 'assort'}
        tasks = [(point, seed) for seed in trial_seeds(3, 8)]
        assert run_trials(tree_trial, tasks, workers=2) == run_trials(tree_trial, tasks, workers=1)


class TestTreeSweep:

    def test_trial_seeds_are_prefix_stable(self):
        assert trial_seeds(5, 3) == trial_seeds(5, 10)[:3]
        assert len(set(trial_seeds(5, 10))) == 10

    def test_rows(self):
        rows = run_tree_sweep(parse_spec(SWEEP), workers=1)
        assert len(rows) == 4
        for row in rows:
            assert 0 <= row['success_rate'] <= 1
            assert row['stderr'] == pytest.approx(math.sqrt(row['success_rate'] * (1 - row['success_rate']) / 20))

    def test_output_is_reproducible(self, tmp_path):
        spec = parse_spec(SWEEP)
        run_tree_sweep(spec, str(tmp_path / 'first'), workers=1)
        run_tree_sweep(spec, str(tmp_path / 'second'), workers=1)
        for name in ('tree-threshold-sweep.csv', 'tree-threshold-sweep_trials.csv'):
            assert (tmp_path / 'first' / name).read_bytes() == (tmp_path / 'second' / name).read_bytes()

    def test_more_trials_keep_earlier_records(self, tmp_path):
        spec = parse_spec(SWEEP)
        run_tree_sweep(spec, str(tmp_path / 'short'), workers=1)
        run_tree_sweep(spec.model_copy(update={'trials': 30}), str(tmp_path / 'long'), workers=1)
        short = _lines(tmp_path / 'short' / 'tree-threshold-sweep_trials.csv')
        long = _lines(tmp_path / 'long' / 'tree-threshold-sweep_trials.csv')
        assert long[:len(short)] == short

    @pytest.mark.parametrize('sampler, adversary, mode', [
        ('d4', 'cutting', 'assort'),
        ('d2', 'opp-path', 'assort'),
        ('plain', 'asym', 'assort'),
        ('d4', 'cutting', 'dissort'),
        ('regular', 'opp-path', 'dissort'),
    ])
    def test_combinations(self, sampler, adversary, mode):
        eps = 0.2 if mode == 'assort' else 0.8
        spec = ExperimentSpec(kind='tree-threshold-sweep', trials=5, seed=1, k=[3], eps=[eps], depth=[3],
                              sampler=[sampler], adversary=[adversary], algo=['maj', 'recmaj'], mode=[mode],
                              asym=0.1)
        rows = run_tree_sweep(spec, workers=1)
        assert len(rows) == 2

    def test_asymmetric_adversary_sets_the_flip_law(self):
        # one leaf under the root: majority is right exactly when the edge kept its spin
        spec = ExperimentSpec(kind='tree-threshold-sweep', trials=4000, seed=3, k=[1], eps=[0.2], depth=[1],
                              sampler=['regular'], adversary=['asym'], algo=['maj'], asym=0.1, sign=1)
        row = run_tree_sweep(spec, workers=1)[0]
        expected = 1 - (0.5 * (0.2 - 0.1) + 0.5 * (0.2 + 0.1))
        assert abs(row['success_rate'] - expected) <= 4 * math.sqrt(expected * (1 - expected) / 4000)

    def test_oversized_trees_are_skipped(self):
        point = {'k': 10, 'eps': 0.1, 'depth': 4, 'sampler': 'regular', 'adversary': 'none', 'algo': 'map',
                 'mode': 'assort'}
        outcome = tree_trial((point, 0))
        assert outcome['skipped'] == 1
        assert math.isnan(outcome['success'])
        spec = ExperimentSpec(kind='tree-threshold-sweep', trials=2, seed=0, k=[10], eps=[0.1], depth=[4],
                              sampler=['regular'], algo=['map', 'maj'])
        skipped, counted = run_tree_sweep(spec, workers=1)
        assert skipped['skipped'] == 2 and math.isnan(skipped['success_rate'])
        assert counted['skipped'] == 0 and 0 <= counted['success_rate'] <= 1

    @pytest.mark.slow
    def test_dissortative_recursive_majority_follows_the_recursion(self):
        trials = 600
        spec = ExperimentSpec(kind='tree-threshold-sweep', trials=trials, seed=4, k=[3], eps=[0.9], depth=[6],
                              sampler=['regular'], adversary=['opp-path'], algo=['recmaj'], mode=['dissort'])
        rate = run_tree_sweep(spec, workers=1)[0]['success_rate']
        expected = recursion_iterates(3, 0.1, 6)[-1]
        assert abs(rate - expected) <= 4 * math.sqrt(expected * (1 - expected) / trials)

    def test_unknown_adversary(self):
        spec = ExperimentSpec(kind='tree-threshold-sweep', trials=1, seed=1, adversary=['everything'])
        with pytest.raises(ParameterError):
            run_tree_sweep(spec, workers=1)


class TestGraphRunners:

    def test_recovery(self, tmp_path):
        spec = ExperimentSpec(kind='graph-recovery', trials=2, seed=3, n=[40], a=[20], b=[2],
                              adversary=['none', 'dist1'], algo=['sdp', 'oracle'], pairs=50)
        rows = run_experiment(spec, str(tmp_path), workers=1)
        assert len(rows) == 4
        oracle = [row for row in rows if row['algo'] == 'oracle']
        assert all(row['score'] == 1 and row['relative_spin'] == 1 for row in oracle)
        assert all(row['converged'] == 2 for row in rows)
        assert (tmp_path / 'graph-recovery.csv').exists()
        assert (tmp_path / 'graph-recovery_trials.csv').exists()

    @pytest.mark.slow
    @pytest.mark.parametrize('mode, a, b', [('assort', 30, 2), ('dissort', 2, 30)])
    def test_cutting_and_cross_deletion_barely_move_the_score(self, mode, a, b):
        common = dict(kind='graph-recovery', trials=10, seed=11, n=[500], a=[a], b=[b], mode=[mode], algo=['sdp'],
                      pairs=100)
        clean = run_graph_recovery(ExperimentSpec(**common, adversary=['none'], budget=['none']), workers=1)[0]
        attacked = run_graph_recovery(ExperimentSpec(**common, adversary=['dist1'], budget=['delete-cross']),
                                      workers=1)[0]
        assert clean['converged'] >= 8 and attacked['converged'] >= 8
        assert clean['score'] >= 0.75
        assert clean['score'] - attacked['score'] < 0.05

    def test_unknown_graph_adversary(self):
        spec = ExperimentSpec(kind='graph-recovery', trials=1, seed=0, n=[20], a=[6], b=[2], adversary=['opp-path'])
        with pytest.raises(ParameterError):
            run_graph_recovery(spec, workers=1)

    def test_robustness(self):
        spec = ExperimentSpec(kind='sdp-robustness', trials=2, seed=5, n=[30], a=[15], b=[1],
                              budget=['independent:0.05'])
        rows = run_sdp_robustness(spec, workers=1)
        assert len(rows) == 1
        row = rows[0]
        assert row['converged'] == 2
        assert row['within_envelope'] == 1
        assert row['degradation'] == pytest.approx(row['score'] - row['score_changed'])

    def test_relative_spin(self):
        spec = ExperimentSpec(kind='relative-spin', trials=2, seed=2, n=[40], a=[20], b=[2], algo=['oracle'],
                              pairs=100)
        row = run_relative_spin(spec, workers=1)[0]
        assert row['random_accuracy'] == 1
        assert row['semirandom_accuracy'] == 1
        assert row['gap'] == 0


class TestCobweb:

    def test_rows(self):
        rows = run_cobweb(3, 0.05, 10, grid_points=20)
        series = [row['series'] for row in rows]
        assert series.count('iterate') == 11
        assert series.count('curve') == 20
        assert series[-1] == 'fixed-point'
        iterates = [row for row in rows if row['series'] == 'iterate']
        assert iterates[0]['line'] == 1
        assert iterates[-1]['q'] == pytest.approx(rows[-1]['q'], abs=1e-6)

    def test_eleven_children_above_critical(self):
        assert run_cobweb(11, 0.25, 5)[-1]['q'] == 0

    @pytest.mark.parametrize('k, eps', [(2, 0.1), (3, 1.0)])
    def test_invalid(self, k, eps):
        with pytest.raises(ParameterError):
            run_cobweb(k, eps, 5)

    def test_experiment_file(self, tmp_path):
        spec = parse_spec("kind = cobweb\ntrials = 1\nseed = 0\nk = 3, 5\neps = 0.05\niterations = 4\n")
        rows = run_experiment(spec, str(tmp_path), cobweb_grid=10)
        assert len(rows) == 2 * (5 + 10 + 1)
        assert len(_lines(tmp_path / 'cobweb.csv')) == len(rows) + 1


class TestSeparationCheck:

    def test_row(self):
        row = run_separation_check(9, 0.3, 500, seed=0)
        assert row['removed'] == pytest.approx(9 ** 6 - row['k_prime_sixth'])
        assert row['pass'] in (0, 1)
        assert row['bound'] > 0

    def test_below_nine_children(self):
        with pytest.raises(ParameterError):
            run_separation_check(5, 0.1, 10, seed=0)

    @pytest.mark.slow
    def test_bound_holds(self):
        assert run_separation_check(9, 0.3, 20_000, seed=1)['pass'] == 1

    @pytest.mark.parametrize('kind', ['appendix-a-check', 'separation-check'])
    def test_experiment_kinds(self, tmp_path, kind):
        spec = parse_spec(f"kind = {kind}\ntrials = 1\nseed = 0\nk = 9\neps = 0.3\nsamples = 200\n")
        rows = run_experiment(spec, str(tmp_path))
        assert len(rows) == 1
        assert len(_lines(tmp_path / f"{kind}.csv")) == 2

    def test_published_names(self):
        assert run_appendix_a_check is run_separation_check
        assert appendix_a_bound(9, 0.3) == separation_bound(9, 0.3)
