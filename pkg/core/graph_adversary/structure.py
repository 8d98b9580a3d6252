from dataclasses import dataclass

import numpy as np

from core.graph_adversary.adversary import AdversaryOutcome
from core.graph_adversary.markings import goodness
from core.sbm.graph import Graph, Marking
from core.sbm.params import Mode


@dataclass(frozen=True)
class Violation:
    rule: str
    node: int
    detail: str


def _neighbour_pair(g: Graph, v: int) -> tuple:
    return tuple(sorted(int(u) for u in g.neighbors(v)))


def verify_structure(pre: Graph, post: AdversaryOutcome) -> list[Violation]:
    """
    Check the structural facts every adversary outcome satisfies.

    - GOOD nodes keep degree >= 3.
    - No node acquires degree 2; surviving degree-2 nodes keep their neighbour pair.
    - The GOOD set equals the goodness property recomputed on the post graph.
    - MARKED nodes are exactly the isolated ones plus degree-2 nodes flanked by two GOOD nodes.
    - Edges are only deleted, only at cut nodes, and only between spins the mode allows.

    :param pre: Marked precursor.
    :param post: Adversary outcome derived from ``pre``.
    :return: Violations; empty when everything holds.
    :rtype: list[Violation]
    """
    g = post.graph
    violations = []
    good = g.markings == Marking.GOOD
    degrees = g.degrees

    for v in np.flatnonzero(good & (degrees < 3)):
        violations.append(Violation('good-degree', int(v), f"GOOD node has degree {degrees[v]}"))

    for v in np.flatnonzero(degrees == 2):
        if pre.degrees[v] != 2:
            violations.append(Violation('new-degree-two', int(v), f"degree {pre.degrees[v]} became 2"))
        elif _neighbour_pair(pre, v) != _neighbour_pair(g, v):
            violations.append(Violation('new-degree-two', int(v), "neighbour pair changed"))

    recomputed = goodness(g.adjacency)
    for v in np.flatnonzero(recomputed != good):
        violations.append(Violation('goodness', int(v), f"GOOD marking {bool(good[v])} vs property {bool(recomputed[v])}"))

    good_neighbours = np.asarray(g.adjacency @ good.astype(np.int64)).reshape(-1)
    flanked = (degrees == 2) & (good_neighbours == 2)
    marked = g.markings == Marking.MARKED
    for v in np.flatnonzero(marked & ~flanked & (degrees != 0)):
        violations.append(Violation('marked', int(v), f"MARKED node with degree {degrees[v]} is not flanked by GOOD nodes"))
    for v in np.flatnonzero(flanked & ~marked):
        violations.append(Violation('marked', int(v), "degree-2 node between GOOD nodes is not MARKED"))

    pre_edges = {tuple(e) for e in pre.edges().tolist()}
    post_edges = {tuple(e) for e in g.edges().tolist()}
    for u, v in sorted(post_edges - pre_edges):
        violations.append(Violation('monotone', u, f"edge ({u}, {v}) was added"))
    same = Mode(post.mode) is Mode.DISSORTATIVE
    for u, v in sorted(pre_edges - post_edges):
        if (pre.spins[u] == pre.spins[v]) != same:
            violations.append(Violation('monotone', u, f"deleted edge ({u}, {v}) joins disallowed spins"))
        if u not in post.cut_nodes and v not in post.cut_nodes:
            violations.append(Violation('monotone', u, f"deleted edge ({u}, {v}) is not at a cut node"))
    for v in sorted(post.cut_nodes):
        if pre.degrees[v] != 2 or degrees[v] != 0:
            violations.append(Violation('cut', v, f"cut node has degree {pre.degrees[v]} before and {degrees[v]} after"))
    if post.m != len(post.cut_nodes):
        violations.append(Violation('cut', -1, f"m={post.m} but {len(post.cut_nodes)} cut nodes"))
    return violations
