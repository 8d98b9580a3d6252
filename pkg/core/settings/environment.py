import os
import pathlib

import dotenv
import yaml

from core.errors import InputError

SETTINGS_DIRECTORY = pathlib.Path(__file__).parent.resolve()
PROJECT_ROOT = SETTINGS_DIRECTORY.parent.parent

# Environment variables holding paths, made absolute against the project root
PATH_ENVS = ['LOG_CONFIG']


def load_config(path: str = 'config.yaml') -> dict:
    """
    Read the YAML configuration file.

    :param path: Path to the file.
    :return: Parsed configuration.
    :rtype: dict
    :raises InputError: When the file is missing or not a mapping.
    """
    try:
        with open(path, 'r') as f:
            config = yaml.safe_load(f)
    except OSError as e:
        raise InputError(f"Cannot read configuration {path}: {e}")
    if not isinstance(config, dict):
        raise InputError(f"Configuration {path} must be a mapping")
    return config


def load_environment(env_path: str = None):
    """
    Load ``core/settings/.env`` without overriding variables already set, then resolve the path
    variables against the project root.
    """
    dotenv.load_dotenv(env_path or os.path.join(SETTINGS_DIRECTORY, '.env'), override=False)
    for name in PATH_ENVS:
        value = os.getenv(name)
        if value and not os.path.isabs(value):
            os.environ[name] = str(PROJECT_ROOT / value)
