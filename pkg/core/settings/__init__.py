from .environment import load_config, load_environment
