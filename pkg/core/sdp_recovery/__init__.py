from .objective import LambdaRule, SdpInstance, build_objective, expected_objective
from .solver import SdpSolution, project_box, project_psd, solve_sdp
from .rounding import Rounding, round_solution, top_eigenpair
from .monotone import (ChangeBudget, MonotoneChange, apply_monotone_change, check_monotone_change, sample_monotone_change,
                       validate_monotone_change)
from .certificate import CertificateReport, dual_certificate
from .cut_norm import cut_norm
from .envelope import recovery_regime, transfer_envelope
