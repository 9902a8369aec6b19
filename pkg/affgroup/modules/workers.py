"""Thread pool helpers for node-parallel evaluation."""
import concurrent.futures
import logging
import os
import typing


__all__ = ["THREADS_ENV", "worker_count", "set_worker_cap", "map_chunks"]


THREADS_ENV = "AFFGROUP_THREADS"
"""Environment variable capping the number of worker threads."""

logger = logging.getLogger(__name__)

_cap: typing.Optional[int] = None

T = typing.TypeVar("T")


def set_worker_cap(cap: typing.Optional[int]) -> None:
    """Override the worker cap for this process (None restores the environment default)."""
    global _cap
    _cap = cap


def worker_count() -> int:
    """Number of worker threads to use."""
    count = os.cpu_count() or 1
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            count = min(count, max(1, int(env)))
        except ValueError:
            logger.warning("Ignoring non-integer %s=%r.", THREADS_ENV, env)
    if _cap is not None:
        count = min(count, _cap)
    return max(1, count)


def map_chunks(
    fn: typing.Callable[[int, int], T],
    total: int,
    chunk: int,
) -> typing.List[T]:
    """Evaluate fn(start, stop) over consecutive index ranges covering [0, total).

    Results come back in range order whatever the number of workers.
    """
    chunk = max(1, chunk)
    ranges = [(start, min(start + chunk, total)) for start in range(0, total, chunk)]
    workers = min(worker_count(), len(ranges))
    if workers <= 1:
        return [fn(start, stop) for start, stop in ranges]
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda r: fn(*r), ranges))
