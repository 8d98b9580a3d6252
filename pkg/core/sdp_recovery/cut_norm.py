import numpy as np

from core.errors import CapacityError, InputError, ParameterError
from core.random_streams import stream

EXACT_LIMIT = 24
CHUNK = 1 << 16


def _sign(x: np.ndarray) -> np.ndarray:
    return np.where(x < 0, -1.0, 1.0)


def _exact(M: np.ndarray) -> float:
    n = M.shape[1]
    if n > EXACT_LIMIT:
        raise CapacityError(f"Exact cut norm is limited to {EXACT_LIMIT} columns, got {n}")
    # x and -x give the same value, so the first coordinate is fixed to +1
    bits = np.arange(n - 1, dtype=np.int64)
    best = 0.0
    for begin in range(0, 1 << (n - 1), CHUNK):
        index = np.arange(begin, min(begin + CHUNK, 1 << (n - 1)), dtype=np.int64)
        X = np.ones((index.size, n))
        X[:, 1:] = 1 - 2 * ((index[:, None] >> bits) & 1)
        best = max(best, float(np.abs(X @ M.T).sum(axis=1).max()))
    return best


def _heuristic(M: np.ndarray, seed: int, restarts: int) -> float:
    rng = stream(seed, 'cut-norm')
    best = 0.0
    for _ in range(restarts):
        x = _sign(rng.standard_normal(M.shape[1]))
        value = -np.inf
        while True:
            y = _sign(M @ x)
            x = _sign(M.T @ y)
            current = float(y @ M @ x)
            if current <= value:
                break
            value = current
        best = max(best, value)
    return best


def cut_norm(M, mode: str = 'exact', seed: int = 0, restarts: int = 20) -> float:
    """
    The infinity-to-one norm max over x in {-1, 1}^n of ||M x||_1.

    :param M: Real matrix.
    :param mode: ``exact`` enumerates sign vectors (at most 24 columns); ``heuristic`` alternates
        y = sign(M x), x = sign(M^T y) from random starts and returns a lower bound.
    :param seed: Seed for the heuristic starts.
    :param restarts: Heuristic restarts.
    :return: The norm or its lower bound.
    :rtype: float
    :raises CapacityError: When ``exact`` is asked for more than 24 columns.
    """
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2:
        raise InputError(f"Expected a matrix, got shape {M.shape}")
    if M.size == 0:
        return 0.0
    if mode == 'exact':
        return _exact(M)
    if mode == 'heuristic':
        return _heuristic(M, seed, restarts)
    raise ParameterError(f"Unknown cut norm mode '{mode}'")
