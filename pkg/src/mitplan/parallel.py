"""Worker-count plumbing. Results never depend on the count, only throughput does."""

from __future__ import annotations

import os
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

T = TypeVar("T")
R = TypeVar("R")

ENV_VAR = "MITPLAN_THREADS"


def thread_count(requested: int | None = None) -> int:
    """Resolve a worker count: explicit value, else $MITPLAN_THREADS, 0 meaning all cores."""
    if requested is None:
        raw = os.environ.get(ENV_VAR, "1").strip() or "1"
        try:
            requested = int(raw)
        except ValueError:
            raise ValueError(f"{ENV_VAR} must be an integer, got {raw!r}") from None
    if requested < 0:
        raise ValueError(f"thread count must be >= 0, got {requested}")
    if requested == 0:
        requested = os.cpu_count() or 1
    return requested


def ordered_map(fn: Callable[[T], R], items: Iterable[T], workers: int) -> list[R]:
    """``list(map(fn, items))``, optionally on a thread pool; output order is input order."""
    items = list(items)
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
