"""Deterministic chunked execution for Monte Carlo loops.

Work is split into fixed-size chunks indexed 0..n_chunks-1; each chunk
draws its own RNG substream and writes into a disjoint output slice, so
results are bit-identical for any worker count.
"""

from concurrent.futures import ThreadPoolExecutor


def iter_chunks(n_total, chunk_size):
    """Yield (chunk_index, lo, hi) covering range(n_total)."""
    chunk_size = int(chunk_size)
    if chunk_size < 1:
        raise ValueError("chunk_size must be >= 1")
    lo = 0
    index = 0
    while lo < n_total:
        hi = min(n_total, lo + chunk_size)
        yield index, lo, hi
        lo = hi
        index += 1


def run_chunked(n_total, chunk_size, n_workers, work):
    """Run work(chunk_index, lo, hi) over all chunks, optionally threaded."""
    tasks = list(iter_chunks(n_total, chunk_size))
    if int(n_workers) <= 1 or len(tasks) <= 1:
        for task in tasks:
            work(*task)
        return
    with ThreadPoolExecutor(max_workers=int(n_workers)) as pool:
        futures = [pool.submit(work, *task) for task in tasks]
        for future in futures:
            future.result()
