import logging
from contextlib import contextmanager

import treelib
from fastapi import status
from fastapi.exceptions import HTTPException

from core.errors import CapacityError, InputError, ParameterError
from core.sbm.graph import Marking
from core.tree_model import Tree

logger = logging.getLogger('uvicorn')


def to_treelib(t: Tree) -> treelib.Tree:
    """
    Copy a broadcast tree into a treelib tree.

    Node identifiers are the breadth-first indices; tags read ``<index>:<spin>``; data holds the
    spin, depth, marking and leaf flag.

    :param t: The tree.
    :return: The treelib copy.
    :rtype: treelib.Tree
    """
    tree = treelib.Tree()
    for v in range(t.size):
        spin = int(t.spins[v])
        tree.create_node(f"{v}:{'+' if spin > 0 else '-'}", v, parent=None if v == 0 else int(t.parent[v]),
                         data={'spin': spin, 'depth': int(t.depth[v]), 'marking': Marking(t.markings[v]).name,
                               'leaf': bool(t.leaf[v])})
    return tree


def convert_tree_to_dict(tree: treelib.Tree) -> list[dict]:
    """
    Flatten a treelib tree into a parent/child node list.

    :param tree: The tree to convert.
    :type tree: treelib.Tree
    :return: One dict per node; the root's parent is ``#``.
    :rtype: list[dict]
    """
    tree_data = []
    for node in tree.all_nodes():
        parent = tree.parent(node.identifier)
        parent_id = '#' if parent is None else parent.identifier
        tree_data.append({"id": node.identifier, "parent": parent_id, "text": node.tag, "li_attr": node.data})
    return sorted(tree_data, key=lambda item: item["id"])


@contextmanager
def domain_errors():
    """Translate domain exceptions into HTTP errors: bad parameters 400, oversized requests 413."""
    try:
        yield
    except (ParameterError, InputError) as e:
        logger.info(f"Rejected request: {e}")
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))
    except CapacityError as e:
        logger.info(f"Request too large: {e}")
        raise HTTPException(status_code=status.HTTP_413_REQUEST_ENTITY_TOO_LARGE, detail=str(e))
