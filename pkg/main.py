import logging
import sys

from cli import build_parser, commands
from core.errors import CapacityError, ConvergenceError, InputError, NumericError, ParameterError, RunError
from core.settings import load_config, load_environment
from loggers.setup import setup_logging


def main(argv: list[str] = None) -> int:
    """
    Load configuration, environment and logging, then dispatch the sub-command.

    :return: Exit status; 2 for invalid parameters or inputs, 1 for failed runs.
    :rtype: int
    """
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
    except InputError as e:
        logging.getLogger('app').error(str(e))
        return 2
    load_environment()
    loggers = setup_logging(config)
    app_logger = loggers['app']

    try:
        return commands[args.command](args, config)
    except (ParameterError, InputError) as e:
        app_logger.error(str(e))
        return 2
    except (CapacityError, ConvergenceError, NumericError, RunError) as e:
        app_logger.error(str(e))
        return 1


# APP SPIN UP
if __name__ == "__main__":
    logging.captureWarnings(True)
    sys.exit(main())
