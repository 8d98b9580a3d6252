import logging
from dataclasses import dataclass

import numpy as np

from core.errors import ConvergenceError, NumericError
from core.sdp_recovery.objective import SdpInstance

logger = logging.getLogger('sdp')

MAX_ITER = 5000
TOL_PER_NODE = 1e-6
RHO = 1.0


@dataclass(frozen=True, eq=False)
class SdpSolution:
    """
    Solver output.

    Attributes:
        Z: Feasible PSD matrix with diagonal at most 1.
        value: Objective <B, Z>.
        iterations: Iterations performed.
        primal_residual: Final ||X - Y||_F.
        dual_residual: Final rho ||Y - Y_prev||_F.
    """
    Z: np.ndarray
    value: float
    iterations: int
    primal_residual: float
    dual_residual: float


def project_psd(M: np.ndarray) -> np.ndarray:
    """Nearest PSD matrix in Frobenius norm: clip the negative eigenvalues."""
    try:
        values, vectors = np.linalg.eigh((M + M.T) / 2)
    except np.linalg.LinAlgError as e:
        raise NumericError(f"Eigendecomposition failed: {e}")
    positive = values > 0
    vectors = vectors[:, positive]
    return (vectors * values[positive]) @ vectors.T


def project_box(M: np.ndarray) -> np.ndarray:
    """Nearest symmetric matrix with diagonal at most 1."""
    Y = (M + M.T) / 2
    np.fill_diagonal(Y, np.minimum(np.diag(Y), 1.0))
    return Y


def _make_feasible(X: np.ndarray) -> np.ndarray:
    # congruence by diag(1/sqrt(max(1, X_ii))) keeps X PSD and pulls the diagonal to <= 1
    scale = 1 / np.sqrt(np.maximum(np.diag(X), 1.0))
    return X * np.outer(scale, scale)


def solve_sdp(inst: SdpInstance, tol: float = None, max_iter: int = MAX_ITER, rho: float = RHO) -> SdpSolution:
    """
    Maximise <B, Z> over symmetric PSD Z with diag(Z) <= 1 by alternating directions.

    The X-step projects Y - U + B / rho onto the PSD cone, the Y-step clips the diagonal, and rho
    is doubled or halved whenever one residual exceeds the other tenfold.

    :param inst: Objective.
    :param tol: Stopping threshold on both residuals; 1e-6 n by default.
    :param max_iter: Iteration budget.
    :param rho: Initial penalty.
    :return: Solution.
    :rtype: SdpSolution
    :raises ConvergenceError: When the budget runs out.
    """
    n = inst.n
    B = inst.B
    tol = TOL_PER_NODE * n if tol is None else tol
    Y = np.eye(n)
    U = np.zeros((n, n))
    primal = dual = np.inf
    for iteration in range(1, max_iter + 1):
        X = project_psd(Y - U + B / rho)
        previous = Y
        Y = project_box(X + U)
        U += X - Y
        primal = float(np.linalg.norm(X - Y))
        dual = float(rho * np.linalg.norm(Y - previous))
        if primal <= tol and dual <= tol:
            break
        if primal > 10 * dual:
            rho *= 2
            U /= 2
        elif dual > 10 * primal:
            rho /= 2
            U *= 2
        if iteration % 100 == 0:
            logger.debug(f"SDP iteration {iteration}: primal {primal:.3e}, dual {dual:.3e}, rho {rho:g}")
    else:
        raise ConvergenceError(max_iter, primal, dual)

    Z = _make_feasible(X)
    value = float(np.vdot(B, Z))
    logger.info(f"SDP solved: n={n}, value={value:.6f}, {iteration} iterations")
    return SdpSolution(Z=Z, value=value, iterations=iteration, primal_residual=primal, dual_residual=dual)
