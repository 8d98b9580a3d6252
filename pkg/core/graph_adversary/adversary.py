import logging
from dataclasses import dataclass

import numpy as np

from core.errors import ParameterError
from core.random_streams import stream
from core.sbm.graph import Graph, Marking
from core.sbm.params import Mode, ModelParams

logger = logging.getLogger('app')


def delta_of_eps(eps: float) -> float:
    """
    Probability with which the adversary cuts a cuttable MARKED node.

    :param eps: Noise in [0, 1/2).
    :return: 1 when eps <= 1/3, else (1 - 2 eps)^2 / eps^2.
    :rtype: float
    :raises ParameterError: If eps is outside [0, 1/2).
    """
    if not 0 <= eps < 0.5:
        raise ParameterError(f"Noise must lie in [0, 1/2), got {eps}")
    if eps <= 1 / 3:
        return 1.0
    return (1 - 2 * eps) ** 2 / eps ** 2


@dataclass(frozen=True, eq=False)
class AdversaryOutcome:
    """
    Result of one adversary run.

    Attributes:
        graph: Post-adversary graph; markings are those of the precursor.
        cut_nodes: Nodes whose two edges were deleted.
        w: MARKED cuttable nodes left uncut.
        m: Cut nodes.
        delta: Cut probability used.
        mode: Orientation the cut rule followed.
    """
    graph: Graph
    cut_nodes: frozenset
    w: int
    m: int
    delta: float
    mode: Mode = Mode.ASSORTATIVE


def cuttable_nodes(g: Graph, mode: Mode = Mode.ASSORTATIVE) -> np.ndarray:
    """
    MARKED degree-2 nodes whose two neighbours both carry the opposite spin (the same spin in
    dissortative mode), in ascending order.

    :param g: Marked graph.
    :param mode: Orientation.
    :return: Node indices.
    :rtype: numpy.ndarray
    """
    candidates = np.flatnonzero((g.markings == Marking.MARKED) & (g.degrees == 2))
    if candidates.size == 0:
        return candidates
    start = g.adjacency.indptr[candidates]
    first = g.adjacency.indices[start]
    second = g.adjacency.indices[start + 1]
    own = g.spins[candidates]
    target = -own if Mode(mode) is Mode.ASSORTATIVE else own
    return candidates[(g.spins[first] == target) & (g.spins[second] == target)]


def apply_adversary(g: Graph, params: ModelParams, seed: int) -> AdversaryOutcome:
    """
    Run the monotone cutting adversary on a marked precursor.

    Each cuttable node is cut independently with probability delta, the Bernoulli draws taken
    in ascending node order from the ``adversary`` stream of ``seed``.

    :param g: Marked precursor.
    :param params: Model parameters (noise and mode).
    :param seed: Seed.
    :return: Outcome with the post graph and the w, m counts.
    :rtype: AdversaryOutcome
    """
    delta = params.delta
    cuttable = cuttable_nodes(g, params.mode)
    draws = stream(seed, 'adversary').random(cuttable.size)
    cut = cuttable[draws < delta]
    post = g.without_edges_at(cut) if cut.size else g
    logger.debug(f"Adversary cut {cut.size} of {cuttable.size} cuttable nodes (delta={delta:.4f})")
    return AdversaryOutcome(graph=post, cut_nodes=frozenset(int(v) for v in cut), w=int(cuttable.size - cut.size),
                            m=int(cut.size), delta=delta, mode=params.mode)
