from .params import ModelParams, Mode
from .graph import Graph, Marking, as_spins
from .sampling import sample_precursor, sample_spins, skip_sample
from .metrics import census, partial_recovery_score, relative_spin_accuracy, relative_spin_from_score
from .neighborhood import coupling_radius, extract_ball, is_tree
from .io import read_graph, write_graph, read_params, write_params
