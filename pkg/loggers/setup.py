import os
import logging
import logging.config

LOGGER_NAMES = ('app', 'sdp', 'harness', 'uvicorn')


def setup_logging(config: dict) -> dict:
    """
    Configure logging from the ini file named by ``LOG_CONFIG``, then apply the levels in
    ``config['logging']['level']``.

    Without ``LOG_CONFIG`` a plain stderr handler is installed instead.

    :param config: Parsed configuration.
    :type config: dict
    :return: The named loggers.
    :rtype: dict
    """
    log_config = os.getenv('LOG_CONFIG')
    if log_config and os.path.exists(log_config):
        logging.config.fileConfig(log_config, disable_existing_loggers=False)
    else:
        logging.basicConfig(format='%(asctime)s %(levelname)s [%(name)s] %(message)s')

    for logger_name, level in config.get('logging', {}).get('level', {}).items():
        logging.getLogger(None if logger_name == 'root' else logger_name).setLevel(level)

    return {name: logging.getLogger(name) for name in LOGGER_NAMES}
