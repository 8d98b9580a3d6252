from .markings import assign_markings, goodness, marking_vector
from .adversary import AdversaryOutcome, apply_adversary, cuttable_nodes, delta_of_eps
from .precursors import (PrecursorCensus, count_precursors, enumerate_precursors, precursor_census,
                         precursor_probability)
from .structure import Violation, verify_structure
