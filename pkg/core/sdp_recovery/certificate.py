import math
from dataclasses import dataclass

import numpy as np

from core.errors import InputError, NumericError
from core.sbm.graph import Graph, as_spins
from core.sbm.metrics import census
from core.sbm.params import ModelParams

ANNIHILATION_TOL = 1e-8
PSD_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class CertificateReport:
    """
    Checks of the candidate dual certificate Lambda = diag(gamma) - R'.

    Attributes:
        gamma: Dual variables, one per node.
        nonnegative: All gamma_v >= 0.
        annihilates: Lambda sigma = 0 up to 1e-8 n.
        psd: Smallest eigenvalue of Lambda at least -1e-6.
        min_eigenvalue: Smallest eigenvalue of Lambda.
    """
    gamma: np.ndarray
    nonnegative: bool
    annihilates: bool
    psd: bool
    min_eigenvalue: float

    @property
    def valid(self) -> bool:
        return self.nonnegative and self.annihilates and self.psd


def dual_certificate(g: Graph, truth, params: ModelParams, lambda_prime: float = None) -> CertificateReport:
    """
    Candidate dual certificate built from the community sizes.

    gamma_v = s (a - b)/2 + s (lambda - lambda') (sum of spins) sigma_v and
    R' = s [(a - b)/2n sigma sigma^T + (lambda - lambda') J] with lambda = (a + b)/2n and
    s = +1 (assortative) or -1 (dissortative). With this choice Lambda sigma vanishes exactly.

    :param g: Graph, used for its size.
    :param truth: True spins.
    :param params: Model parameters.
    :param lambda_prime: Regulariser of the perturbed objective; log n / n by default.
    :return: The certificate and its checks.
    :rtype: CertificateReport
    """
    truth = as_spins(truth, g.n).astype(np.float64)
    n = g.n
    if params.n != n:
        raise InputError(f"Parameters are for {params.n} nodes, graph has {n}")
    s = params.mode.sign
    lam = (params.a + params.b) / (2 * n)
    lambda_prime = math.log(n) / n if lambda_prime is None else lambda_prime
    shift = lam - lambda_prime
    gamma = s * (params.a - params.b) / 2 + s * shift * census(truth) * truth
    R = s * ((params.a - params.b) / (2 * n) * np.outer(truth, truth) + shift)
    Lam = np.diag(gamma) - R
    try:
        smallest = float(np.linalg.eigvalsh(Lam)[0])
    except np.linalg.LinAlgError as e:
        raise NumericError(f"Eigendecomposition failed: {e}")
    residual = float(np.max(np.abs(Lam @ truth)))
    return CertificateReport(gamma=gamma, nonnegative=bool(np.all(gamma >= 0)),
                             annihilates=residual <= ANNIHILATION_TOL * n,
                             psd=smallest >= -PSD_TOL, min_eigenvalue=smallest)
