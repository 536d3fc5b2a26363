"""Range minima of the exponent C(p) defined by S_p / (p^n - 1)^g = p^(-C(p)).

S_p sums D^g (or phi(D)) over the candidate set with cutoff D < p^kappa. The
minimum over a prime range is found exactly by branch and bound: a vectorized
divisor-count bound gives a lower bound for C(p) on every prime of a chunk,
and only primes whose bound can still beat the running minimum are expanded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..forbidden import candidate_factorization
from ..intarith import (
    cyclotomic_poly,
    divisors,
    divisors_of_int,
    divisors_with_phi,
)
from ..primes import base_primes, chunk_ranges, primes_between
from .parallel import run_chunks
from .records import ScanRecord

TRIAL_LIMIT = 2000
CHUNK_WIDTH = 500_000
_EPS = 1e-9
_INT64_SAFE = 2**62


@dataclass(frozen=True)
class PrimeDensity:
    p: int
    s: int
    c: float | None


@dataclass
class DensityResult:
    c_min: float
    argmin: int | None
    rows: list[PrimeDensity] = field(default_factory=list)
    expanded: int = 0
    primes: int = 0

    def records(self, params: dict) -> list[ScanRecord]:
        return [ScanRecord("density", r.p, (r.s, r.c), params) for r in self.rows]


def _iroot_floor(x: int, k: int) -> int:
    if x < 2:
        return x
    r = int(round(x ** (1.0 / k)))
    while r**k > x:
        r -= 1
    while (r + 1) ** k <= x:
        r += 1
    return r


def cutoff_below(p: int, kappa) -> int:
    """Largest integer D with D < p^kappa (kappa >= 1 rational)."""
    k = Fraction(kappa).limit_denominator(10**6)
    a, b = k.numerator, k.denominator
    top = p**a
    r = _iroot_floor(top, b)
    return r - 1 if r**b == top else r


def sentinel(n_p: int, g_p: int) -> float:
    return float(g_p * (n_p - 1) + 1)


def forbidden_values(n_p: int, p: int, forbidden: str = "theorem") -> list[int]:
    """D_{n_p,delta}(p) for every delta | n_p, or with ``forbidden="program"`` just
    p - 1 and (p^n_p - 1)/(p - 1); the two agree when n_p is prime."""
    m = p**n_p - 1
    if forbidden == "program":
        return [p - 1, m // (p - 1)]
    if forbidden != "theorem":
        raise ValueError(f"unknown forbidden-set rule {forbidden!r}")
    return [m // cyclotomic_poly(d)(p) for d in divisors_of_int(n_p)]


def prime_s_value(n_p: int, g_p: int, p: int, kappa=1, weight: str = "power", budget=None, seed=0, forbidden: str = "theorem") -> int:
    """Exact S_p for one prime."""
    cap = cutoff_below(p, kappa)
    total = candidate_factorization(n_p, p, budget, seed)
    forbidden_vals = forbidden_values(n_p, p, forbidden)
    s = 0
    if weight == "phi":
        for d, ph in divisors_with_phi(total, cap):
            if all(v % d for v in forbidden_vals):
                s += ph
    else:
        for d in divisors(total, cap):
            if all(v % d for v in forbidden_vals):
                s += d**g_p
    return s


def c_value(n_p: int, g_p: int, p: int, s: int) -> float | None:
    if s == 0:
        return None
    return (g_p * math.log(p**n_p - 1) - math.log(s)) / math.log(p)


def _poly_int64(coeffs, ps: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(ps)
    for c in reversed(coeffs):
        acc = acc * ps + c
    return acc


def c_lower_bounds(n_p: int, g_p: int, ps: np.ndarray, kappa=1, trial_limit: int = TRIAL_LIMIT) -> np.ndarray:
    """Rigorous lower bounds for C(p), one per prime in ``ps``.

    S_p <= (#divisors of p^n - 1 below the cutoff) * cutoff^g, and the divisor
    count is bounded from a partial factorization: exact exponents for primes
    up to ``trial_limit``, and at most floor(log R / log T) further prime
    factors in each leftover cofactor R.
    """
    logp = np.log(ps.astype(np.float64))
    if ps.size == 0:
        return logp
    top = int(ps[-1])
    ds = divisors_of_int(n_p)
    if any(cyclotomic_poly(d)(top) >= _INT64_SAFE for d in ds):
        return np.full(ps.shape, -np.inf)
    trial = [int(q) for q in base_primes(trial_limit)]
    next_prime = trial_limit + 1
    while any(next_prime % q == 0 for q in trial if q * q <= next_prime):
        next_prime += 1
    log_np = math.log(next_prime)
    tau = np.ones(ps.shape, dtype=np.float64)
    shared = {q: np.zeros(ps.shape, dtype=np.int64) for q in trial if n_p % q == 0}
    for d in ds:
        vals = _poly_int64(cyclotomic_poly(d).coefficients, ps.astype(np.int64))
        for q in trial:
            if (q - 1) % d and q not in shared:
                continue
            hits = np.flatnonzero(vals % q == 0)
            if hits.size == 0:
                continue
            e = np.zeros(hits.size, dtype=np.int64)
            live = np.arange(hits.size)
            while live.size:
                vals[hits[live]] //= q
                e[live] += 1
                live = live[vals[hits[live]] % q == 0]
            if q in shared:
                shared[q][hits] += e
            else:
                tau[hits] *= e + 1
        cof = vals.astype(np.float64)
        extra = np.ones(ps.shape, dtype=np.float64)
        big = vals > 1
        omega = np.floor(np.log(np.where(big, cof, 1.0)) / log_np + 1e-9)
        extra[big] = np.exp2(np.maximum(omega[big], 1.0))
        tau *= extra
    for q, e in shared.items():
        tau *= e + 1
    half = 2 * Fraction(kappa).limit_denominator(10**6) <= n_p
    count = tau / 2.0 if half else tau
    log_m = n_p * logp + np.log1p(-np.exp(-n_p * logp))
    kap = float(kappa)
    return (g_p * log_m - np.log(count) - g_p * kap * logp) / logp


def _scan_chunk(task):
    n_p, g_p, lo, hi, kappa, weight, stream, best, budget, seed, forbidden = task
    ps = primes_between(lo, hi)
    if stream:
        rows = []
        for p in ps.tolist():
            s = prime_s_value(n_p, g_p, p, kappa, weight, budget, seed, forbidden)
            rows.append(PrimeDensity(p, s, c_value(n_p, g_p, p, s)))
        return rows, int(ps.size), int(ps.size)
    bounds = c_lower_bounds(n_p, g_p, ps, kappa)
    order = np.argsort(bounds, kind="stable")
    best_c, best_p = best, None
    expanded = 0
    for i in order.tolist():
        if bounds[i] > best_c + _EPS:
            break
        p = int(ps[i])
        s = prime_s_value(n_p, g_p, p, kappa, weight, budget, seed, forbidden)
        expanded += 1
        c = c_value(n_p, g_p, p, s)
        if c is None:
            continue
        if c < best_c or (c == best_c and best_p is not None and p < best_p):
            best_c, best_p = c, p
    return [PrimeDensity(best_p, 0, best_c)] if best_p is not None else [], expanded, int(ps.size)


def density_scan(
    n_p: int,
    g_p: int,
    lo: int,
    hi: int,
    kappa=1,
    weight: str = "power",
    stream: bool = False,
    workers: int = 1,
    chunk: int = CHUNK_WIDTH,
    budget=None,
    seed: int = 0,
    forbidden: str = "theorem",
) -> DensityResult:
    """Least C(p) over primes p in [lo, hi] and the prime attaining it.

    ``weight="phi"`` sums phi(D) instead of D^g. With ``stream=True`` every
    prime is evaluated and returned in ``rows``. ``forbidden`` selects the
    forbidden-divisor rule, see forbidden_values.
    """
    if n_p < 2 or g_p < 1:
        raise ValueError("need n_p >= 2 and g_p >= 1")
    if kappa < 1:
        raise ValueError("kappa must be >= 1")
    if weight not in ("power", "phi"):
        raise ValueError(f"unknown weight {weight!r}")
    start = sentinel(n_p, g_p)
    pieces = chunk_ranges(lo, hi, chunk)
    result = DensityResult(start, None)
    if workers <= 1 and not stream:
        # a single process can carry the running minimum across chunks
        for a, b in pieces:
            rows, expanded, count = _scan_chunk((n_p, g_p, a, b, kappa, weight, False, result.c_min, budget, seed, forbidden))
            result.expanded += expanded
            result.primes += count
            for r in rows:
                if r.c < result.c_min:
                    result.c_min, result.argmin = r.c, r.p
        return result
    tasks = [(n_p, g_p, a, b, kappa, weight, stream, start, budget, seed, forbidden) for a, b in pieces]
    for rows, expanded, count in run_chunks(_scan_chunk, tasks, workers):
        result.expanded += expanded
        result.primes += count
        for r in rows:
            if stream:
                result.rows.append(r)
            if r.c is not None and r.c < result.c_min:
                result.c_min, result.argmin = r.c, r.p
    return result


def phi_variant_scan(lo: int, hi: int, **kw) -> DensityResult:
    """Quadratic case with S_p = sum of phi(D)."""
    return density_scan(2, 1, lo, hi, weight="phi", **kw)
