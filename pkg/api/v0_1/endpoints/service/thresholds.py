import logging

from fastapi import APIRouter, Query, status
from starlette.responses import JSONResponse

from api.v0_1.endpoints.utils.server import domain_errors
from core.harness import run_cobweb
from core.thresholds import threshold_report

thresholds_router = APIRouter(prefix='/thresholds')

logger = logging.getLogger("uvicorn")


@thresholds_router.get("")
def get_thresholds(k: float = Query(...), eps: float = Query(None), model: str = Query('regular')) -> JSONResponse:
    """
    Threshold report for one branching number.

    Parameters:
    - **k** (float): Number of children (regular) or mean offspring (poisson).
    - **eps** (float): Optional noise for the separation bound.
    - **model** (str): "regular" or "poisson".

    Returns:
    - **JSONResponse**: The report fields.

    Raises:
    - **HTTPException**: 400 on invalid parameters.
    """
    with domain_errors():
        report = threshold_report(k, eps, model)
    return JSONResponse(status_code=status.HTTP_200_OK, content=report.model_dump())


@thresholds_router.get("/cobweb")
def get_cobweb(k: float = Query(...), eps: float = Query(...), iterations: int = Query(50, ge=0, le=10000),
               model: str = Query('regular'), points: int = Query(200, ge=2, le=5000)) -> JSONResponse:
    """
    Cobweb data for the recursion p -> M(p (1 - eps)).

    Returns:
    - **JSONResponse**: A JSON containing:
        - **rows**: iterate, curve and fixed-point rows (series, index, q, m, line).
    """
    with domain_errors():
        rows = run_cobweb(k, eps, iterations, model, points)
    return JSONResponse(status_code=status.HTTP_200_OK, content={"rows": rows})
