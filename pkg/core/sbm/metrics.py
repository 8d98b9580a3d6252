import numpy as np

from core.errors import InputError


def census(spins) -> int:
    """Sum of spins."""
    return int(np.sum(np.asarray(spins, dtype=np.int64)))


def partial_recovery_score(est, truth) -> float:
    """
    Fraction of agreeing spins, up to a global flip.

    :param est: Estimated spins.
    :param truth: True spins.
    :return: max(agreement, n - agreement) / n, in [1/2, 1].
    :rtype: float
    :raises InputError: If the lengths differ.
    """
    est = np.asarray(est)
    truth = np.asarray(truth)
    if est.shape != truth.shape:
        raise InputError(f"Length mismatch: {est.size} estimated spins vs {truth.size} true spins")
    n = truth.size
    if n == 0:
        raise InputError("Cannot score an empty assignment")
    agreement = int(np.count_nonzero(est == truth))
    return max(agreement, n - agreement) / n


def relative_spin_accuracy(est, truth, pairs: np.ndarray) -> float:
    """
    Fraction of node pairs whose relative spin sigma_u * sigma_v is predicted correctly.

    :param est: Estimated spins.
    :param truth: True spins.
    :param pairs: (P, 2) array of node pairs.
    :return: Accuracy in [0, 1].
    :rtype: float
    """
    est = np.asarray(est, dtype=np.int64)
    truth = np.asarray(truth, dtype=np.int64)
    if est.shape != truth.shape:
        raise InputError(f"Length mismatch: {est.size} estimated spins vs {truth.size} true spins")
    u, v = pairs[:, 0], pairs[:, 1]
    return float(np.mean(est[u] * est[v] == truth[u] * truth[v]))


def relative_spin_from_score(eta: float) -> float:
    """Relative-spin accuracy implied by a score of eta on both nodes of a random pair."""
    return eta ** 2 + (1 - eta) ** 2
