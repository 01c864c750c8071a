"""Worker pools and environment details for wcolour."""

import os
import platform
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Iterable, Iterator, Optional, TypeVar

from .errors import InvalidInputError

T = TypeVar("T")
R = TypeVar("R")


def resolve_workers(requested: Optional[int] = None) -> int:
    """Pool size: explicit request, then WCOLOUR_WORKERS, then the CPU count."""
    if requested is not None:
        if requested < 1:
            raise InvalidInputError(f"--workers must be >= 1, got {requested}")
        return requested

    env_workers = os.getenv("WCOLOUR_WORKERS", "").strip()
    if env_workers:
        try:
            value = int(env_workers)
        except ValueError:
            raise InvalidInputError(f"WCOLOUR_WORKERS must be an integer, got '{env_workers}'") from None
        if value < 1:
            raise InvalidInputError(f"WCOLOUR_WORKERS must be >= 1, got {value}")
        return value

    return os.cpu_count() or 1


def ordered_map(
    fn: Callable[[T], R],
    items: Iterable[T],
    workers: int = 1,
    on_done: Optional[Callable[[T], None]] = None,
) -> Iterator[R]:
    """Apply fn to every item, yielding results in submission order.

    Items may finish in any order on the pool; the caller always sees them in
    the order given, which keeps emitted output independent of scheduling.
    """
    items = list(items)

    def run(item: T) -> R:
        result = fn(item)
        if on_done:
            on_done(item)
        return result

    if workers <= 1 or len(items) <= 1:
        for item in items:
            yield run(item)
        return

    pool = ThreadPoolExecutor(max_workers=workers)
    try:
        yield from pool.map(run, items)
    finally:
        # a consumer that stops early must not wait for the queued tail
        pool.shutdown(wait=True, cancel_futures=True)


def environment_info(workers: Optional[int] = None) -> list[tuple[str, str]]:
    """Key/value pairs shown in the debug panel."""
    pairs = [
        ("Python", sys.version.split()[0]),
        ("Platform", sys.platform),
        ("Machine", platform.machine()),
        ("CWD", str(Path.cwd())),
    ]
    if workers is not None:
        pairs.append(("Workers", str(workers)))
    return pairs
