from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

from app.utils.config import settings

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(func: Callable[[T], R], items: Iterable[T], workers: int | None = None) -> list[R]:
    """
    Applies `func` to every item on a thread pool and returns results in input order.

    Callers reduce the returned list sequentially, so the reduction order is fixed
    no matter how many workers ran.
    """
    work = list(items)
    n_workers = min(workers or settings.WORKERS, len(work))
    if n_workers <= 1:
        return [func(item) for item in work]
    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        return list(pool.map(func, work))
