from .experiment import ExperimentSpec, load_spec, parse_spec
from .records import CsvSink, TrialRecord, format_value, point_label, write_rows
from .pool import run_trials, worker_count
from .runners import (run_appendix_a_check, run_cobweb, run_experiment, run_graph_recovery, run_relative_spin,
                      run_sdp_robustness, run_separation_check, run_tree_sweep, trial_seeds)
