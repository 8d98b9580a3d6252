from fastapi import APIRouter

from api.v0_1.endpoints.service.thresholds import thresholds_router
from api.v0_1.endpoints.service.trees import trees_router


application_router = APIRouter()

application_router.include_router(thresholds_router)
application_router.include_router(trees_router)
