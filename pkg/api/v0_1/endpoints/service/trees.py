import logging

from fastapi import APIRouter, HTTPException, Query, Request, status
from starlette.responses import JSONResponse

from api.v0_1.endpoints.utils.server import convert_tree_to_dict, domain_errors, to_treelib
from core.errors import ParameterError
from core.sbm.params import Mode
from core.tree_model import Tree, attacked_tree
from core.tree_reconstruct import estimators

trees_router = APIRouter(prefix='/trees')

logger = logging.getLogger("uvicorn")

POSTERIOR_MODELS = {'plain': 'plain', 'regular': 'plain', 'd2': 'dist4', 'd3': 'dist4', 'd4': 'dist4'}


def _sample(k: float, eps: float, depth: int, dist: str, adversary: str, mode: str, seed: int, asym: float = 0.0,
            sign: int = 1) -> Tree:
    if mode not in (m.value for m in Mode):
        raise ParameterError(f"Unknown mode '{mode}'")
    return attacked_tree(dist, adversary, k, eps, depth, seed, Mode(mode), asym=asym, sign=sign)


@trees_router.get("/sample")
def sample_tree(request: Request, k: float = Query(...), eps: float = Query(...), depth: int = Query(..., ge=0),
                dist: str = Query('plain'), adversary: str = Query('none'), mode: str = Query('assort'),
                seed: int = Query(0), asym: float = Query(0.0, ge=0), sign: int = Query(1)) -> JSONResponse:
    """
    Sample one broadcast tree.

    Returns:
    - **JSONResponse**: A JSON containing:
        - **root_spin**, **size**, **leaves**: summary of the tree.
        - **nodes**: the tree as a parent/child node list.

    Raises:
    - **HTTPException**: 400 on invalid parameters, 413 when the tree exceeds the server's node limit.
    """
    limit = request.app.state.max_tree_nodes
    with domain_errors():
        t = _sample(k, eps, depth, dist, adversary, mode, seed, asym, sign)
    if t.size > limit:
        raise HTTPException(status_code=status.HTTP_413_REQUEST_ENTITY_TOO_LARGE,
                            detail=f"Tree has {t.size} nodes, the limit is {limit}")
    logger.info(f"Sampled {dist} tree with {t.size} nodes")
    return JSONResponse(status_code=status.HTTP_200_OK,
                        content={"root_spin": t.root_spin, "size": t.size, "leaves": int(t.leaf.sum()),
                                 "nodes": convert_tree_to_dict(to_treelib(t))})


@trees_router.get("/recover")
def recover_root(k: float = Query(...), eps: float = Query(...), depth: int = Query(..., ge=0),
                 dist: str = Query('plain'), adversary: str = Query('none'), algo: str = Query('maj'),
                 mode: str = Query('assort'), seed: int = Query(0), asym: float = Query(0.0, ge=0),
                 sign: int = Query(1)) -> JSONResponse:
    """
    Sample one tree and estimate its root.

    Returns:
    - **JSONResponse**: A JSON containing:
        - **estimate**: the estimated root spin.
        - **root_spin**: the true root spin.
        - **correct**: whether they agree.
        - **confidence**: posterior probability of the estimate (map only).
    """
    if algo not in estimators:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=f"Unknown estimator '{algo}'")
    with domain_errors():
        t = _sample(k, eps, depth, dist, adversary, mode, seed, asym, sign)
        estimate = estimators[algo](t, seed, eps, POSTERIOR_MODELS[dist], Mode(mode))
    return JSONResponse(status_code=status.HTTP_200_OK,
                        content={"estimate": estimate.spin, "root_spin": t.root_spin,
                                 "correct": estimate.spin == t.root_spin, "confidence": estimate.confidence})
