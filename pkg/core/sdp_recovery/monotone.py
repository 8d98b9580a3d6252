from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from core.errors import InputError, ParameterError
from core.random_streams import stream
from core.sbm.graph import Graph, as_spins
from core.sbm.params import Mode


@dataclass(frozen=True)
class ChangeBudget:
    """
    Which eligible pairs a monotone change touches.

    Attributes:
        rule: ``none``, ``independent`` (each eligible pair with ``probability``), ``delete-cross``
            (remove every unfavoured edge) or ``subset`` (every eligible pair inside a node set).
        probability: Pair probability for ``independent``.
        fraction: Share of nodes drawn into the set for ``subset``.
    """
    rule: str = 'none'
    probability: float = 0.0
    fraction: float = 0.0

    def __post_init__(self):
        if self.rule not in ('none', 'independent', 'delete-cross', 'subset'):
            raise ParameterError(f"Unknown change budget '{self.rule}'")
        if not 0 <= self.probability <= 1 or not 0 <= self.fraction <= 1:
            raise ParameterError("Budget probabilities must lie in [0, 1]")

    @classmethod
    def parse(cls, text: str) -> 'ChangeBudget':
        """Parse ``none``, ``delete-cross``, ``independent:P`` or ``subset:F``."""
        rule, _, value = text.partition(':')
        try:
            number = float(value) if value else 0.0
        except ValueError:
            raise ParameterError(f"Bad budget value in '{text}'")
        if rule == 'independent':
            return cls(rule, probability=number)
        if rule == 'subset':
            return cls(rule, fraction=number)
        return cls(rule)


@dataclass(frozen=True, eq=False)
class MonotoneChange:
    """
    Symmetric change matrix S with entries in {-1, 0, +1}.

    +1 adds a favoured pair (same side when assortative, opposite sides when dissortative) that is
    not yet an edge; -1 removes an existing unfavoured edge.
    """
    S: sp.csr_matrix
    truth: np.ndarray
    mode: Mode = Mode.ASSORTATIVE

    @property
    def additions(self) -> int:
        return int((self.S > 0).sum() // 2)

    @property
    def deletions(self) -> int:
        return int((self.S < 0).sum() // 2)


def _favoured(truth: np.ndarray, mode: Mode) -> np.ndarray:
    same = np.equal.outer(truth, truth)
    return same if Mode(mode) is Mode.ASSORTATIVE else ~same


def _symmetric(upper: np.ndarray, values: np.ndarray, n: int) -> sp.csr_matrix:
    rows, cols = upper
    S = sp.coo_matrix((np.concatenate([values, values]), (np.concatenate([rows, cols]), np.concatenate([cols, rows]))),
                      shape=(n, n)).tocsr()
    S.sort_indices()
    return S.astype(np.int8)


def sample_monotone_change(g: Graph, truth, budget: ChangeBudget, seed: int,
                           mode: Mode = Mode.ASSORTATIVE) -> MonotoneChange:
    """
    Draw a monotone change of ``g`` for the given budget.

    :param g: Observed graph.
    :param truth: True spins.
    :param budget: Which pairs to change.
    :param seed: Seed for the ``monotone`` stream.
    :param mode: Orientation; decides which pairs are favoured.
    :return: The change.
    :rtype: MonotoneChange
    """
    truth = as_spins(truth, g.n)
    n = g.n
    A = g.adjacency.toarray().astype(bool)
    favoured = _favoured(truth, mode)
    upper = np.triu(np.ones((n, n), dtype=bool), k=1)
    add = upper & favoured & ~A
    remove = upper & ~favoured & A
    rng = stream(seed, 'monotone')
    if budget.rule == 'none':
        add[:] = False
        remove[:] = False
    elif budget.rule == 'independent':
        add &= rng.random((n, n)) < budget.probability
        remove &= rng.random((n, n)) < budget.probability
    elif budget.rule == 'delete-cross':
        add[:] = False
    else:
        inside = rng.random(n) < budget.fraction
        block = np.outer(inside, inside)
        add &= block
        remove &= block
    plus, minus = np.nonzero(add), np.nonzero(remove)
    upper_pairs = (np.concatenate([plus[0], minus[0]]), np.concatenate([plus[1], minus[1]]))
    values = np.concatenate([np.ones(plus[0].size, dtype=np.int8), -np.ones(minus[0].size, dtype=np.int8)])
    return MonotoneChange(S=_symmetric(upper_pairs, values, n), truth=truth, mode=Mode(mode))


def check_monotone_change(change: MonotoneChange, g: Graph):
    """
    Check that a change is monotone for ``g``.

    :raises InputError: On asymmetry, a non-zero diagonal, entries outside {-1, 0, 1}, an addition
        of an unfavoured pair or an existing edge, or a deletion of a favoured pair or a non-edge.
    """
    S = sp.csr_matrix(change.S)
    if S.shape != (g.n, g.n):
        raise InputError(f"Change has shape {S.shape}, graph has {g.n} nodes")
    if (S != S.T).nnz:
        raise InputError("Change matrix is not symmetric")
    if np.any(S.diagonal() != 0):
        raise InputError("Change matrix has a non-zero diagonal")
    coo = sp.triu(S, k=1).tocoo()
    if np.any(~np.isin(coo.data, (-1, 1))):
        raise InputError("Change entries must be -1, 0 or +1")
    truth = as_spins(change.truth, g.n)
    same = truth[coo.row] == truth[coo.col]
    favoured = same if change.mode is Mode.ASSORTATIVE else ~same
    present = np.asarray(g.adjacency[coo.row, coo.col]).reshape(-1) != 0
    added = coo.data > 0
    if np.any(added & ~favoured) or np.any(added & present):
        raise InputError("Change adds an unfavoured pair or an existing edge")
    if np.any(~added & favoured) or np.any(~added & ~present):
        raise InputError("Change removes a favoured pair or a missing edge")


def validate_monotone_change(change: MonotoneChange, g: Graph) -> bool:
    """True when every entry of the change follows the monotone sign pattern for ``g``."""
    try:
        check_monotone_change(change, g)
    except InputError:
        return False
    return True


def apply_monotone_change(g: Graph, change: MonotoneChange) -> Graph:
    """Graph with adjacency A + S, after checking the change."""
    check_monotone_change(change, g)
    adjacency = (g.adjacency.astype(np.int16) + change.S.astype(np.int16)).tocsr()
    adjacency.eliminate_zeros()
    upper = sp.triu(adjacency, k=1).tocoo()
    return g.with_edges(np.column_stack([upper.row, upper.col]))
