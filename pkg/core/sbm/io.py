import logging
import os

import numpy as np
import yaml

from core.errors import InputError
from core.sbm.graph import Graph, Marking
from core.sbm.params import ModelParams

logger = logging.getLogger('app')


def _paths(prefix: str) -> dict:
    return {kind: f"{prefix}.{kind}" for kind in ('edges', 'spins', 'marks', 'params')}


def write_graph(g: Graph, prefix: str):
    """
    Write ``PREFIX.edges``, ``PREFIX.spins`` and ``PREFIX.marks``.

    The edge file starts with "n m" and lists one "u v" pair per line with u < v.

    :param g: Graph to write.
    :param prefix: Output path prefix.
    :return: None
    """
    paths = _paths(prefix)
    directory = os.path.dirname(os.path.abspath(prefix))
    os.makedirs(directory, exist_ok=True)
    edges = g.edges()
    with open(paths['edges'], 'w', encoding='utf-8') as f:
        f.write(f"{g.n} {edges.shape[0]}\n")
        for u, v in edges:
            f.write(f"{u} {v}\n")
    with open(paths['spins'], 'w', encoding='utf-8') as f:
        f.writelines('+1\n' if s == 1 else '-1\n' for s in g.spins)
    with open(paths['marks'], 'w', encoding='utf-8') as f:
        f.writelines(f"{Marking(m).code}\n" for m in g.markings)
    logger.info(f"Wrote graph with {g.n} nodes and {edges.shape[0]} edges to {prefix}.*")


def _read_lines(path: str) -> list[str]:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return [line.strip() for line in f if line.strip()]
    except FileNotFoundError:
        raise InputError(f"Missing file {path}")


def read_graph(prefix: str) -> Graph:
    """
    Read and validate a graph written by :func:`write_graph`.

    The markings file is optional; NONE is assumed when it is absent.

    :param prefix: Input path prefix.
    :return: The graph.
    :rtype: Graph
    :raises InputError: On malformed, asymmetric or inconsistent files.
    """
    paths = _paths(prefix)
    lines = _read_lines(paths['edges'])
    if not lines:
        raise InputError(f"Empty edge file {paths['edges']}")
    try:
        n, m = (int(x) for x in lines[0].split())
        edges = np.array([[int(x) for x in line.split()] for line in lines[1:]], dtype=np.int64).reshape(-1, 2)
    except ValueError:
        raise InputError(f"Malformed edge file {paths['edges']}")
    if edges.shape[0] != m:
        raise InputError(f"Edge file declares {m} edges but lists {edges.shape[0]}")
    if m and np.any(edges[:, 0] >= edges[:, 1]):
        raise InputError("Edges must be listed as 'u v' with u < v")

    spin_lines = _read_lines(paths['spins'])
    try:
        spins = [int(s) for s in spin_lines]
    except ValueError:
        raise InputError(f"Malformed spin file {paths['spins']}")

    markings = None
    if os.path.exists(paths['marks']):
        markings = [Marking.from_code(code) for code in _read_lines(paths['marks'])]
        if len(markings) != n:
            raise InputError(f"Expected {n} markings, got {len(markings)}")
    return Graph.from_edges(n, edges, spins, markings)


def write_params(params: ModelParams, prefix: str, seed: int = None):
    """Write the ``PREFIX.params`` YAML sidecar."""
    record = {'n': params.n, 'a': float(params.a), 'b': float(params.b), 'mode': params.mode.value}
    if seed is not None:
        record['seed'] = seed
    with open(_paths(prefix)['params'], 'w', encoding='utf-8') as f:
        yaml.safe_dump(record, f, sort_keys=False)


def read_params(prefix: str) -> ModelParams:
    """Read the ``PREFIX.params`` YAML sidecar."""
    path = _paths(prefix)['params']
    try:
        with open(path, 'r', encoding='utf-8') as f:
            record = yaml.safe_load(f)
    except FileNotFoundError:
        raise InputError(f"Missing parameter file {path}")
    return ModelParams(n=int(record['n']), a=float(record['a']), b=float(record['b']), mode=record.get('mode', 'assort'))
