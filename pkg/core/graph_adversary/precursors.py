import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from core.errors import CapacityError
from core.graph_adversary.adversary import cuttable_nodes
from core.graph_adversary.markings import marking_vector
from core.sbm.graph import Graph, Marking
from core.sbm.params import Mode

ENUMERATION_LIMIT = 12


@dataclass(frozen=True)
class PrecursorCensus:
    """
    Spin census of a post-adversary graph.

    Attributes:
        g: GOOD nodes.
        m: Isolated MARKED nodes.
        alpha: Excess of +1 spins among isolated MARKED nodes, (m+ - m-) / 2.
        beta: Excess of +1 spins among GOOD nodes, (g+ - g-) / 2.
    """
    g: int
    m: int
    alpha: Fraction
    beta: Fraction

    @property
    def good_plus(self) -> int:
        return int(Fraction(self.g, 2) + self.beta)

    @property
    def good_minus(self) -> int:
        return int(Fraction(self.g, 2) - self.beta)

    @property
    def marked_plus(self) -> int:
        return int(Fraction(self.m, 2) + self.alpha)

    @property
    def marked_minus(self) -> int:
        return int(Fraction(self.m, 2) - self.alpha)


def precursor_census(g: Graph) -> PrecursorCensus:
    good = g.markings == Marking.GOOD
    isolated = (g.markings == Marking.MARKED) & (g.degrees == 0)
    good_plus = int(np.count_nonzero(good & (g.spins == 1)))
    good_minus = int(np.count_nonzero(good & (g.spins == -1)))
    marked_plus = int(np.count_nonzero(isolated & (g.spins == 1)))
    marked_minus = int(np.count_nonzero(isolated & (g.spins == -1)))
    return PrecursorCensus(g=good_plus + good_minus, m=marked_plus + marked_minus,
                           alpha=Fraction(marked_plus - marked_minus, 2), beta=Fraction(good_plus - good_minus, 2))


def count_precursors(g: Graph, mode: Mode = Mode.ASSORTATIVE) -> tuple[int, PrecursorCensus]:
    """
    Number of precursors consistent with a post-adversary graph.

    Every isolated MARKED node was joined to two GOOD nodes of the opposite spin (of the same spin
    in dissortative mode), and the choices are independent across nodes.

    :param g: Post-adversary graph carrying the precursor markings.
    :param mode: Orientation of the cut rule.
    :return: (count, census).
    :rtype: tuple[int, PrecursorCensus]
    """
    census = precursor_census(g)
    plus_pairs, minus_pairs = comb(census.good_plus, 2), comb(census.good_minus, 2)
    if Mode(mode) is Mode.ASSORTATIVE:
        count = plus_pairs ** census.marked_minus * minus_pairs ** census.marked_plus
    else:
        count = plus_pairs ** census.marked_plus * minus_pairs ** census.marked_minus
    return count, census


def precursor_probability(w: int, m: int, delta: float) -> float:
    """(1 - delta)^w * delta^m, with 0^0 = 1."""
    return (1 - delta) ** w * delta ** m


def enumerate_precursors(g: Graph, mode: Mode = Mode.ASSORTATIVE, limit: int = ENUMERATION_LIMIT) -> set[frozenset]:
    """
    Brute-force every precursor the adversary could have turned into ``g``.

    The adversary only isolates degree-2 nodes, so a precursor differs from ``g`` by giving each
    isolated node of ``g`` either no edges or exactly two. Each candidate is re-marked and kept
    when its markings match the observed ones and every node it isolates was cuttable.

    :param g: Post-adversary graph with markings.
    :param mode: Orientation of the cut rule.
    :param limit: Largest node count accepted.
    :return: Edge sets (frozensets of sorted pairs) of all precursors.
    :rtype: set[frozenset]
    :raises CapacityError: If g has more than ``limit`` nodes.
    """
    if g.n > limit:
        raise CapacityError(f"Precursor enumeration is limited to {limit} nodes, got {g.n}")
    base = {tuple(int(x) for x in edge) for edge in g.edges()}
    isolated = [int(v) for v in np.flatnonzero(g.degrees == 0)]
    options = []
    for v in isolated:
        others = [u for u in range(g.n) if u != v]
        options.append([()] + [tuple(tuple(sorted((v, u))) for u in pair) for pair in itertools.combinations(others, 2)])

    found = set()
    for choice in itertools.product(*options):
        edges = set(base)
        for added in choice:
            edges.update(added)
        key = frozenset(edges)
        if key in found:
            continue
        candidate = g.with_edges(sorted(edges))
        if not np.array_equal(marking_vector(candidate.adjacency), g.markings):
            continue
        isolated_here = {v for v in isolated if candidate.degrees[v] > 0}
        if isolated_here <= set(int(v) for v in cuttable_nodes(candidate, mode)):
            found.add(key)
    return found
