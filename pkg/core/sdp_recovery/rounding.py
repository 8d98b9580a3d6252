import logging
from dataclasses import dataclass

import numpy as np

from core.errors import InputError, NumericError
from core.random_streams import stream

logger = logging.getLogger('sdp')

POWER_ITERATIONS = 1000
POWER_TOL = 1e-10
DEGENERACY_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class Rounding:
    """
    Spins read off the top eigenvector of a solution matrix.

    Attributes:
        spins: sign(v), zeros mapped to +1.
        eigenvalue: Top eigenvalue.
        gap: Top eigenvalue minus the second one.
        degenerate: True when the top eigenvalue is repeated and the sign vector is not unique.
    """
    spins: np.ndarray
    eigenvalue: float
    gap: float
    degenerate: bool


def _power(Z: np.ndarray, v: np.ndarray, iterations: int) -> tuple[float, np.ndarray, bool]:
    value = 0.0
    for _ in range(iterations):
        w = Z @ v
        value = float(v @ w)
        norm = np.linalg.norm(w)
        if norm == 0:
            return 0.0, v, True
        if np.linalg.norm(w - value * v) <= POWER_TOL * max(abs(value), 1.0):
            return value, w / norm, True
        v = w / norm
    return value, v, False


def top_eigenpair(Z: np.ndarray) -> tuple[float, float, np.ndarray]:
    """
    Top eigenvalue, second eigenvalue and unit top eigenvector of a symmetric PSD matrix.

    Power iteration from a fixed start vector, deflated once for the second eigenvalue; falls
    back to a full eigendecomposition when either run stalls.

    :param Z: Symmetric PSD matrix.
    :return: (lambda_1, lambda_2, v).
    :rtype: tuple[float, float, numpy.ndarray]
    """
    n = Z.shape[0]
    draws = stream(0, 'power-start').standard_normal((2, n))
    start = draws[0] / np.linalg.norm(draws[0])
    first, v, converged = _power(Z, start, POWER_ITERATIONS)
    if converged and first > 0:
        rest = draws[1] - (draws[1] @ v) * v
        if np.linalg.norm(rest) > 0:
            deflated = Z - first * np.outer(v, v)
            second, _, settled = _power(deflated, rest / np.linalg.norm(rest), POWER_ITERATIONS)
            if settled:
                return first, second, v
        else:
            return first, 0.0, v

    logger.debug("Power iteration stalled, falling back to a full eigendecomposition")
    try:
        values, vectors = np.linalg.eigh((Z + Z.T) / 2)
    except np.linalg.LinAlgError as e:
        raise NumericError(f"Eigendecomposition failed: {e}")
    second = float(values[-2]) if n > 1 else 0.0
    return float(values[-1]), second, vectors[:, -1]


def round_solution(sol) -> Rounding:
    """
    Round a solution to spins by the signs of its top eigenvector.

    :param sol: An SdpSolution or a symmetric PSD matrix.
    :return: Spins with the eigen-diagnostics.
    :rtype: Rounding
    """
    Z = np.asarray(getattr(sol, 'Z', sol), dtype=np.float64)
    if Z.ndim != 2 or Z.shape[0] != Z.shape[1] or Z.shape[0] == 0:
        raise InputError(f"Expected a non-empty square matrix, got shape {Z.shape}")
    first, second, v = top_eigenpair(Z)
    gap = first - second
    spins = np.where(v < 0, -1, 1).astype(np.int8)
    return Rounding(spins=spins, eigenvalue=first, gap=gap,
                    degenerate=bool(gap <= DEGENERACY_TOL * max(abs(first), 1.0)))
