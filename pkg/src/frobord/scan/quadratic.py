"""phi-weighted statistics of the candidate set for n_p = 2.

phi_sum(p) is the sum of phi(D) over divisors D < p of p^2 - 1 dividing
neither p - 1 nor p + 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..intarith import FactoredInteger, factorize, is_prime
from ..primes import chunk_ranges, iter_primes
from .density import prime_s_value
from .parallel import run_chunks
from .records import ScanRecord


@dataclass(frozen=True)
class DensityStats:
    p: int
    density: float
    delta: float
    c_stat: float
    phi_sum: int

    @property
    def ratio(self) -> Fraction:
        """phi_sum / (p - 1), exactly."""
        return Fraction(self.phi_sum, self.p - 1)


def phi_sum(p: int, budget=None, seed: int = 0) -> int:
    return prime_s_value(2, 1, p, 1, "phi", budget, seed)


def quad_density_stats(p: int, budget=None, seed: int = 0) -> DensityStats:
    if p < 3 or p % 2 == 0:
        raise ValueError("p must be an odd prime")
    s = phi_sum(p, budget, seed)
    density = s / (p * p - 1.0)
    delta = float(Fraction(s, p - 1) - Fraction(1, 3))
    return DensityStats(p, density, delta, density * p / math.log(p), s)


def quadstat_records(primes, budget=None, seed: int = 0) -> list[ScanRecord]:
    out = []
    for p in primes:
        st = quad_density_stats(p, budget, seed)
        out.append(ScanRecord("quadstat", p, (st.density, st.delta, st.c_stat, st.phi_sum), {}))
    return out


def _audit_chunk(task):
    lo, hi, budget, seed = task
    rows = []
    for p in iter_primes(lo, hi):
        s = phi_sum(p, budget, seed)
        rows.append((p, 3 * s - (p - 1)))
    return rows


def _scan_sign(lo: int, hi: int, workers: int, chunk: int, budget, seed):
    tasks = [(a, b, budget, seed) for a, b in chunk_ranges(lo, hi, chunk)]
    for rows in run_chunks(_audit_chunk, tasks, workers):
        yield from rows


def third_bound_audit(lo: int, hi: int, workers: int = 1, chunk: int = 50_000, budget=None, seed: int = 0) -> list[int]:
    """Primes in [lo, hi] with 3 * phi_sum < p - 1."""
    return [p for p, sign in _scan_sign(lo, hi, workers, chunk, budget, seed) if sign < 0]


def equality_scan(lo: int, hi: int, workers: int = 1, chunk: int = 50_000, budget=None, seed: int = 0) -> list[int]:
    """Primes in [lo, hi] with 3 * phi_sum = p - 1."""
    return [p for p, sign in _scan_sign(lo, hi, workers, chunk, budget, seed) if sign == 0]


def smooth23(bound: int):
    """2^a 3^b in increasing order up to ``bound``, by merging the sequences 2L and 3L."""
    seq = [1]
    i2 = i3 = 0
    yield 1
    while True:
        x, y = 2 * seq[i2], 3 * seq[i3]
        t = min(x, y)
        if t > bound:
            return
        seq.append(t)
        if t == x:
            i2 += 1
        if t == y:
            i3 += 1
        yield t


@dataclass(frozen=True)
class FriablePrime:
    p: int
    p_minus_one: FactoredInteger
    p_plus_one: FactoredInteger


def friable_search(t_bound: int, budget=None, seed: int = 0) -> list[FriablePrime]:
    """Primes p = T + 1 with T = 2^a 3^b, a >= 2, (p + 1)/2 prime and 3 * phi_sum = p - 1."""
    if t_bound < 12:
        raise ValueError("t_bound must be at least 12")
    out = []
    for t in smooth23(t_bound):
        if t % 4:
            continue
        p = t + 1
        # cheap test on (p + 1)/2 first
        if not is_prime((p + 1) // 2) or not is_prime(p):
            continue
        if 3 * phi_sum(p, budget, seed) != p - 1:
            continue
        out.append(FriablePrime(p, factorize(p - 1), factorize(p + 1)))
    return out


def _cmax_chunk(task):
    lo, hi, budget, seed = task
    best = 0.0
    rows = []
    for p in iter_primes(lo, hi):
        s = phi_sum(p, budget, seed)
        c = s / (p * p - 1.0) * p / math.log(p)
        if c > best:
            best = c
            rows.append((p, c))
    return rows


def cmax_scan(bound: int, lo: int = 3, workers: int = 1, chunk: int = 200_000, budget=None, seed: int = 0) -> list[tuple[int, float, float]]:
    """Successive maxima (p, C, C/log p) of C = Density * p / log p over primes in [lo, bound]."""
    if bound < 3:
        raise ValueError("bound must be at least 3")
    tasks = [(a, b, budget, seed) for a, b in chunk_ranges(max(lo, 3), bound, chunk)]
    best = 0.0
    out = []
    # every global record is also a record of its own chunk
    for rows in run_chunks(_cmax_chunk, tasks, workers):
        for p, c in rows:
            if c > best:
                best = c
                out.append((p, c, c / math.log(p)))
    return out
