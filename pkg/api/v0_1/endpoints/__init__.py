from .router import application_router
