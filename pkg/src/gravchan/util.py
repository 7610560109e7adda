"""Small shared helpers: worker-pool sizing, deterministic map, atomic I/O."""

from __future__ import annotations

import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")

#: below this many items threading overhead dominates; stay serial
_PARALLEL_THRESHOLD = 512


def worker_count() -> int:
    """Worker cap from GRAVCHAN_THREADS; unset or 0 means auto."""
    raw = os.environ.get("GRAVCHAN_THREADS", "0").strip()
    try:
        cap = int(raw)
    except ValueError:
        cap = 0
    if cap < 0:
        cap = 0
    if cap == 0:
        return min(4, os.cpu_count() or 1)
    return cap


def thread_map(fn: Callable[[T], R], items: Sequence[T]) -> list[R]:
    """Order-preserving map, optionally threaded.

    Each item is evaluated independently and written to its own slot, so the
    result is identical bit-for-bit whether run serially or in parallel.
    """
    workers = worker_count()
    if workers <= 1 or len(items) < _PARALLEL_THRESHOLD:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def atomic_write_text(path: str, text: str) -> None:
    """Write-then-rename so readers never observe a partial file."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".gravchan-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def fmt17(x: float) -> str:
    """Format with 17 significant digits (round-trip safe for doubles)."""
    return format(float(x), ".17g")
