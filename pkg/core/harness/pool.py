import logging
import os
from concurrent.futures import ProcessPoolExecutor

from core.errors import ParameterError

logger = logging.getLogger('harness')


def worker_count() -> int:
    """Workers for the trial pool from ``SBM_WORKERS``; 1 when unset."""
    value = os.getenv('SBM_WORKERS', '1')
    try:
        workers = int(value)
    except ValueError:
        raise ParameterError(f"SBM_WORKERS must be an integer, got '{value}'")
    if workers < 1:
        raise ParameterError(f"SBM_WORKERS must be at least 1, got {workers}")
    return workers


def run_trials(function, tasks: list, workers: int = None) -> list:
    """
    Apply ``function`` to every task, results in task order whatever the completion order.

    One worker runs inline; more use a process pool, so ``function`` must be a module-level callable.
    """
    workers = worker_count() if workers is None else workers
    if workers == 1 or len(tasks) <= 1:
        return [function(task) for task in tasks]
    logger.debug(f"Dispatching {len(tasks)} trials to {workers} workers")
    chunk = max(1, len(tasks) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(function, tasks, chunksize=chunk))
