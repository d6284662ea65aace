"""Thread pool helpers; parallelism is capped by LCA_THREADS."""
from concurrent.futures import ThreadPoolExecutor
import logging
import os
from typing import Callable, Iterable, List, TypeVar

T = TypeVar('T')
R = TypeVar('R')

logger = logging.getLogger(__name__)


def worker_count(requested: int = None) -> int:
    """Number of worker threads allowed by the environment."""
    cap = int(os.environ.get('LCA_THREADS') or str(os.cpu_count() or 1))
    if requested is None:
        return max(1, cap)
    return max(1, min(int(requested), cap))


def map_ordered(func: Callable[[T], R], items: Iterable[T], threads: int = None) -> List[R]:
    """Apply func to every item, results in input order regardless of scheduling."""
    items = list(items)
    threads = worker_count(threads)
    if threads == 1 or len(items) <= 1:
        return [func(item) for item in items]
    logger.debug('mapping %d items over %d threads', len(items), threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))
