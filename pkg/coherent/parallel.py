# coherent/parallel.py
import asyncio
import os

from coherent.errors import DomainError

THREADS_ENV = "COHERENT_THREADS"


def threads_from_env() -> int:
    """Worker cap from COHERENT_THREADS, defaulting to the CPU count."""
    raw = os.getenv(THREADS_ENV)
    if raw is None or raw.strip() == "":
        return os.cpu_count() or 1
    try:
        threads = int(raw)
    except ValueError:
        threads = 0
    if threads < 1:
        raise DomainError(f"{THREADS_ENV}={raw!r} is not a positive integer")
    return threads


async def _gather_rows(fn, items, threads: int):
    gate = asyncio.Semaphore(threads)

    async def one(item):
        async with gate:
            return await asyncio.to_thread(fn, item)

    # gather returns results in submission order
    return await asyncio.gather(*(one(item) for item in items))


def run_rows(fn, items, threads: int = 1) -> list:
    """Maps fn over items, at most `threads` at a time, preserving order."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    return list(asyncio.run(_gather_rows(fn, items, threads)))
