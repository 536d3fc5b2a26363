"""Prime ranges: numpy segmented sieve below 2**32, probable-prime walk above."""

from __future__ import annotations

import math

import numpy as np

from .intarith import is_prime

SIEVE_LIMIT = 2**32
SEGMENT = 1 << 22


def base_primes(limit: int) -> np.ndarray:
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for i in range(2, math.isqrt(limit) + 1):
        if flags[i]:
            flags[i * i :: i] = False
    return np.flatnonzero(flags).astype(np.int64)


def primes_between(lo: int, hi: int) -> np.ndarray:
    """Primes p with lo <= p <= hi as an int64 array (hi < 2**32)."""
    lo = max(lo, 2)
    if hi < lo:
        return np.zeros(0, dtype=np.int64)
    if hi >= SIEVE_LIMIT:
        raise ValueError("primes_between sieves below 2**32 only")
    base = base_primes(math.isqrt(hi) + 1)
    chunks = []
    start = lo
    while start <= hi:
        stop = min(hi + 1, start + SEGMENT)
        flags = np.ones(stop - start, dtype=bool)
        for q in base:
            q = int(q)
            if q * q >= stop:
                break
            first = max(q * q, -(-start // q) * q)
            flags[first - start :: q] = False
        idx = np.flatnonzero(flags)
        chunks.append(idx.astype(np.int64) + start)
        start = stop
    return np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.int64)


def iter_primes(lo: int, hi: int):
    """Yield primes in [lo, hi] ascending as Python ints."""
    if hi < SIEVE_LIMIT:
        start = max(lo, 2)
        while start <= hi:
            stop = min(hi, start + SEGMENT - 1)
            yield from primes_between(start, stop).tolist()
            start = stop + 1
        return
    if lo < SIEVE_LIMIT:
        yield from iter_primes(lo, SIEVE_LIMIT - 1)
        lo = SIEVE_LIMIT
    n = lo if lo % 2 else lo + 1
    while n <= hi:
        if is_prime(n):
            yield n
        n += 2


def chunk_ranges(lo: int, hi: int, size: int) -> list[tuple[int, int]]:
    """Split [lo, hi] into contiguous inclusive pieces of fixed width."""
    out = []
    start = lo
    while start <= hi:
        stop = min(hi, start + size - 1)
        out.append((start, stop))
        start = stop + 1
    return out
