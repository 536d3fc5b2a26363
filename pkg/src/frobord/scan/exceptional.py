"""Search for primes p with o_p(eta) <= p over families of eta.

For each prime the family is reduced mod p as one integer array and raised,
in one batched square-and-multiply, to every maximal divisor g <= p of
p^{n_p} - 1. Rows that hit 1 get their exact order computed the scalar way.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from ..errors import RankDeficient
from ..forbidden import candidate_factorization
from ..intarith import FactoredInteger, divisors, factor_p_power_minus_one, kronecker
from ..numfield import AlgebraicNumber, FieldSpec, rank_check, reduction_data, splitting_data
from ..order import element_order
from ..primes import chunk_ranges, primes_between
from .parallel import run_chunks
from .records import ScanRecord

_VEC_LIMIT = 3_000_000_000
_BATCH_ELEMENTS = 8_000_000
_LAZY_LIMIT = 2**26


@dataclass(frozen=True)
class Solution:
    eta: tuple[int, ...]
    p: int
    order: int


def eta_family(spec: FieldSpec, ranges: Sequence) -> list[AlgebraicNumber]:
    """All integer combinations with coefficient i drawn from ranges[i] (an int or an iterable)."""
    if len(ranges) != spec.degree:
        raise ValueError(f"need {spec.degree} coefficient ranges")
    axes = [[r] if isinstance(r, int) else list(r) for r in ranges]
    # vary the constant term fastest, highest coefficient slowest
    out = []
    for combo in itertools.product(*reversed(axes)):
        out.append(AlgebraicNumber(spec, tuple(reversed(combo)), 1))
    return out


class ResidueDegreeFilter:
    """Keep primes of residue degree n_p (picklable, so it can travel to workers)."""

    def __init__(self, n_p: int):
        self.n_p = n_p

    def __call__(self, spec, p):
        return splitting_data(spec, p).n_p == self.n_p

    def __repr__(self):
        return f"ResidueDegreeFilter({self.n_p})"


def residue_degree_filter(n_p: int) -> Callable[[FieldSpec, int], bool]:
    return ResidueDegreeFilter(n_p)


def inert_filter(spec: FieldSpec) -> Callable[[FieldSpec, int], bool]:
    return ResidueDegreeFilter(spec.degree)


def sqrt17_filter(spec: FieldSpec, p: int) -> bool:
    """17 a square mod p and (17 + sqrt 17)/2 a non-square, as a direct test."""
    if p in (2, 17):
        return False
    if kronecker(17, p) != 1:
        return False
    u = next(u for u in range(p) if (u * u - 17) % p == 0) if p < 5000 else _sqrt_mod(17, p)
    v = (17 + u) * pow(2, -1, p) % p
    return kronecker(v, p) == -1


sqrt17_filter.n_p = 2


def _sqrt_mod(a: int, p: int) -> int:
    import sympy

    return int(sympy.sqrt_mod(a, p))


def _maximal(ds: list[int], fact: FactoredInteger) -> list[int]:
    qs = fact.primes
    present = set(ds)
    return [d for d in ds if not any(d * q in present for q in qs)]


def _batch_mul(a, b, poly, p):
    """Products in Z[x]/(P, p) of stacked elements a, b of shape (k, n, m); p has shape (k, 1).

    Below 2^26 the sum of n products of residues fits in int64, so one mod
    per coefficient suffices; above it every product is reduced.
    """
    n = a.shape[1]
    lazy = int(p.max()) < _LAZY_LIMIT
    prod = [None] * (2 * n - 1)
    for i in range(n):
        for j in range(n):
            t = a[:, i, :] * b[:, j, :]
            if not lazy:
                t %= p
            prod[i + j] = t if prod[i + j] is None else prod[i + j] + t
    for k in range(2 * n - 2, n - 1, -1):
        c = prod[k] % p
        for i in range(n):
            if poly[i]:
                prod[k - n + i] = prod[k - n + i] - c * poly[i]
    return np.stack([x % p for x in prod[:n]], axis=1)


def _group_factorization(n_p: int, p: int, budget, seed) -> FactoredInteger:
    if n_p == 2:
        return candidate_factorization(2, p, budget, seed)
    return factor_p_power_minus_one(n_p, p, budget, seed)


def _is_one(res, n):
    one = res[:, 0, :] == 1
    if n > 1:
        one &= (res[:, 1:, :] == 0).all(axis=1)
    return one


def _scan_prime_block(spec, coeffs, primes_np, budget, seed):
    """Rows of ``coeffs`` (shape (m, n)) whose order mod p is at most p, for each (p, n_p)."""
    m, n = coeffs.shape
    poly = [int(c) for c in spec.coeffs[:-1]]
    work = []
    for p, n_p in primes_np:
        fact = _group_factorization(n_p, p, budget, seed)
        work.append((p, fact, _maximal(divisors(fact, p), fact)))
    if not work:
        return []
    bits = max(p for p, _, _ in work).bit_length()
    per_prime = m * n * (bits + 1 + max(len(w[2]) for w in work))
    step = max(1, _BATCH_ELEMENTS // per_prime)
    candidates = {}
    for s in range(0, len(work), step):
        part = work[s : s + step]
        ps = np.array([w[0] for w in part], dtype=np.int64)[:, None]
        # table of eta^(2^i) shared by every exponent of the same prime
        squares = [np.transpose(coeffs[None, :, :] % ps[:, :, None], (0, 2, 1)).copy()]
        for _ in range(bits - 1):
            squares.append(_batch_mul(squares[-1], squares[-1], poly, ps))
        owner = np.array([i for i, w in enumerate(part) for _ in w[2]], dtype=np.int64)
        exps = np.array([g for w in part for g in w[2]], dtype=np.int64)
        res = np.zeros((len(exps), n, m), dtype=np.int64)
        res[:, 0, :] = 1
        tp = ps[owner]
        for i in range(bits):
            sel = np.flatnonzero((exps >> i) & 1)
            if sel.size:
                res[sel] = _batch_mul(res[sel], squares[i][owner[sel]], poly, tp[sel])
        for ti, row in zip(*np.nonzero(_is_one(res, n))):
            p, fact, _ = part[owner[ti]]
            candidates.setdefault((p, int(row)), fact)
    hits = []
    for (p, row), fact in sorted(candidates.items()):
        eta = tuple(int(c) for c in coeffs[row])
        o = element_order(tuple(c % p for c in eta), fact, reduction_data(spec.polynomial, p), p)
        assert o <= p
        hits.append(Solution(eta, p, o))
    return hits


def _scalar_least_divisor(spec, eta, p, n_p, budget, seed):
    """The loop of the reference programs: ascending divisors d <= p, first d with eta^d = 1."""
    from ..numfield import powmod_poly

    fact = _group_factorization(n_p, p, budget, seed)
    low = reduction_data(spec.polynomial, p)
    y = tuple(c % p for c in eta)
    for d in divisors(fact, p):
        z = powmod_poly(y, d, low, p)
        if z[0] == 1 and not any(z[1:]):
            return d
    return None


def _chunk_task(task):
    spec, coeffs, lo, hi, keep, budget, seed, scalar = task
    prime_np = []
    for p in primes_between(lo, hi).tolist():
        if p in spec.bad_primes:
            continue
        if keep(spec, p):
            prime_np.append((p, keep.n_p if hasattr(keep, "n_p") else splitting_data(spec, p).n_p))
    if scalar or (prime_np and prime_np[-1][0] >= _VEC_LIMIT):
        out = []
        for p, n_p in prime_np:
            for row in coeffs.tolist():
                d = _scalar_least_divisor(spec, row, p, n_p, budget, seed)
                if d is not None:
                    out.append(Solution(tuple(row), p, d))
        return out
    return _scan_prime_block(spec, coeffs, prime_np, budget, seed)


def exceptional_scan(
    spec: FieldSpec,
    family: Iterable[AlgebraicNumber],
    bound: int,
    congruence_filter=None,
    lo: int = 2,
    allow_degenerate: bool = False,
    workers: int = 1,
    chunk: int = 20_000,
    budget=None,
    seed: int = 0,
    scalar: bool = False,
) -> list[ScanRecord]:
    """Records (eta, p, order) with order <= p, for primes lo <= p <= bound passing the filter.

    Family members failing rank_check are skipped when more than one is
    given; a single rank-deficient eta raises RankDeficient unless
    ``allow_degenerate``. Records come sorted by p, then by eta.
    """
    family = list(family)
    if congruence_filter is None:
        congruence_filter = inert_filter(spec)
    kept = []
    for eta in family:
        if eta.denominator != 1:
            raise ValueError("exceptional scans take integral eta (denominator 1)")
        if allow_degenerate or rank_check(eta):
            kept.append(eta)
        elif len(family) == 1:
            raise RankDeficient(f"{eta} fails the rank condition")
    if not kept:
        return []
    coeffs = np.array([e.numerator for e in kept], dtype=np.int64)
    tasks = [(spec, coeffs, a, b, congruence_filter, budget, seed, scalar) for a, b in chunk_ranges(lo, bound, chunk)]
    params = {"spec": spec.name, "bound": bound}
    out = []
    for sols in run_chunks(_chunk_task, tasks, workers):
        for s in sorted(sols, key=lambda s: (s.p, s.eta)):
            out.append(ScanRecord("exceptional", s.p, (s.eta, s.order), params))
    return out


def dedup_paper(records: list[ScanRecord], spec: FieldSpec) -> list[ScanRecord]:
    """Keep one eta per (p, order) and drop (p, lambda*o) when (p, o) was already kept."""
    by_p: dict[int, list[ScanRecord]] = {}
    for r in records:
        by_p.setdefault(r.p, []).append(r)
    out = []
    for p in sorted(by_p):
        kept_orders: list[int] = []
        for r in sorted(by_p[p], key=lambda r: (r.payload[1], r.payload[0])):
            o = r.payload[1]
            if any(o % k == 0 for k in kept_orders):
                continue
            kept_orders.append(o)
            out.append(r)
    return out


def expand_multiples(records: list[ScanRecord], spec: FieldSpec, budget=None, seed: int = 0) -> list[ScanRecord]:
    """Every d <= p dividing p^{n_p} - 1 and divisible by the order, i.e. all d <= p with eta^d = 1."""
    out = []
    for r in records:
        eta, o = r.payload
        n_p = splitting_data(spec, r.p).n_p
        fact = _group_factorization(n_p, r.p, budget, seed)
        for d in divisors(fact, r.p):
            if d % o == 0:
                out.append(ScanRecord("exceptional", r.p, (eta, d), r.parameters))
    return out
