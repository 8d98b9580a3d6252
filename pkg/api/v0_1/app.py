import os

from fastapi import FastAPI

from api.v0_1.endpoints import application_router
from core.errors import InputError
from core.settings import load_config
from core.settings.environment import PROJECT_ROOT

DEFAULT_MAX_TREE_NODES = 5000


class App:
    """
    Class representing the application.

    Initializes the FastAPI app, includes the routers and records the server limits from the
    configuration file.

    Usage:
        app = App()
        my_app = app.get_app()

    Attributes:
        app: The FastAPI application.
    """
    def __init__(self, config_path: str = None):
        self.app = FastAPI(title="Semirandom block model toolkit")

        # Include routers
        self.app.include_router(application_router)

        try:
            config = load_config(config_path or os.path.join(PROJECT_ROOT, 'config.yaml'))
        except InputError:
            config = {}
        self.app.state.max_tree_nodes = config.get('server', {}).get('max_tree_nodes', DEFAULT_MAX_TREE_NODES)

    def get_app(self):
        return self.app


app_instance = App()
app = app_instance.get_app()
