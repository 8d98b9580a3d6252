import math
from dataclasses import dataclass

import numpy as np

from core.errors import InputError, ParameterError
from core.sbm.graph import Graph
from core.sbm.params import Mode, ModelParams


@dataclass(frozen=True)
class LambdaRule:
    """
    How the regulariser lambda of the objective A - lambda J is chosen.

    Attributes:
        kind: ``model`` for (a + b) / 2n, ``fixed`` for log n / n, ``explicit`` for ``value``.
        value: The explicit value.
        a: Within-community rate, needed by ``model``.
        b: Cross-community rate, needed by ``model``.
    """
    kind: str
    value: float = None
    a: float = None
    b: float = None

    def __post_init__(self):
        if self.kind not in ('model', 'fixed', 'explicit'):
            raise ParameterError(f"Unknown lambda rule '{self.kind}'")
        if self.kind == 'model' and (self.a is None or self.b is None):
            raise ParameterError("The model rule needs a and b")
        if self.kind == 'explicit' and self.value is None:
            raise ParameterError("The explicit rule needs a value")

    @classmethod
    def parse(cls, text: str, params: ModelParams = None) -> 'LambdaRule':
        """Parse ``model``, ``fixed`` or a number."""
        if text == 'model':
            if params is None:
                raise ParameterError("The model rule needs the graph's parameters")
            return cls('model', a=params.a, b=params.b)
        if text == 'fixed':
            return cls('fixed')
        try:
            return cls('explicit', value=float(text))
        except ValueError:
            raise ParameterError(f"Lambda must be 'model', 'fixed' or a number, got '{text}'")

    def resolve(self, n: int) -> float:
        if self.kind == 'model':
            return (self.a + self.b) / (2 * n)
        if self.kind == 'fixed':
            return math.log(n) / n
        return float(self.value)


@dataclass(frozen=True, eq=False)
class SdpInstance:
    """
    Objective of max <B, Z> over PSD Z with diag(Z) <= 1.

    Attributes:
        B: Symmetric objective matrix.
        lam: Regulariser used.
        n: Dimension.
        mode: Orientation; dissortative objectives are 2I - (A - lambda J).
    """
    B: np.ndarray
    lam: float
    n: int
    mode: Mode = Mode.ASSORTATIVE


def adjacency_with_unit_diagonal(g: Graph) -> np.ndarray:
    A = g.adjacency.toarray().astype(np.float64)
    np.fill_diagonal(A, 1.0)
    return A


def build_objective(g: Graph, lambda_rule: LambdaRule, mode: Mode = Mode.ASSORTATIVE) -> SdpInstance:
    """
    Build B = A - lambda J, where A carries ones on its diagonal.

    In dissortative mode the off-diagonal part is negated and the unit diagonal kept, so the
    objective rewards placing connected nodes on opposite sides.

    :param g: Observed graph with at least two nodes.
    :param lambda_rule: Regulariser rule.
    :param mode: Orientation.
    :return: The instance.
    :rtype: SdpInstance
    """
    if g.n < 2:
        raise InputError(f"The SDP needs at least 2 nodes, got {g.n}")
    lam = lambda_rule.resolve(g.n)
    B = adjacency_with_unit_diagonal(g) - lam
    if Mode(mode) is Mode.DISSORTATIVE:
        B = 2 * np.eye(g.n) - B
    return SdpInstance(B=B, lam=lam, n=g.n, mode=Mode(mode))


def expected_objective(params: ModelParams, truth, lam: float) -> np.ndarray:
    """
    Conditional expectation of the objective given the communities:
    (a - b)/2n sigma sigma^T + ((a + b)/2n - lambda) J off the diagonal, B's own diagonal on it.
    """
    truth = np.asarray(truth, dtype=np.float64)
    n = truth.size
    R = (params.a - params.b) / (2 * n) * np.outer(truth, truth) + ((params.a + params.b) / (2 * n) - lam)
    np.fill_diagonal(R, 1 - lam)
    if params.mode is Mode.DISSORTATIVE:
        R = 2 * np.eye(n) - R
    return R
