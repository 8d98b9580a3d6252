from core.errors import ParameterError

GROTHENDIECK = 1.783
ENVELOPE_CONSTANT = 1e4


def transfer_envelope(alpha: float, n: int, a: float, b: float, constant: float = ENVELOPE_CONSTANT,
                      grothendieck: float = GROTHENDIECK) -> float:
    """
    Upper bound on ||sigma sigma^T - Z||_F^2 for the solution after a monotone change, given the
    perturbation size alpha = ||B - R||_{inf->1} of the unchanged objective.

    :return: constant * 2 K_G alpha * n / |a - b|.
    :rtype: float
    """
    if a == b:
        raise ParameterError("The envelope is undefined without signal (a == b)")
    return constant * 2 * grothendieck * alpha * n / abs(a - b)


def recovery_regime(a: float, b: float, eta: float, constant: float = ENVELOPE_CONSTANT) -> bool:
    """
    Whether (a, b) is in the regime where the SDP is guaranteed a score of eta:
    a > 20 and (a - b)^2 >= constant (a + b) / (1 - eta)^2.
    """
    if not 0 <= eta < 1:
        raise ParameterError(f"Target score must lie in [0, 1), got {eta}")
    return a > 20 and (a - b) ** 2 >= constant * (a + b) / (1 - eta) ** 2
