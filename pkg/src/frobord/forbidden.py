"""Forbidden divisors D_{h,delta}(p) of p^h - 1 and the candidate set of small orders."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .intarith import (
    FactoredInteger,
    IntPolynomial,
    cyclotomic_poly,
    cyclotomic_value,
    divisors,
    divisors_of_int,
    factor_cyclotomic_values,
    factor_p2_minus_one,
    x_pow_minus_one,
)


@dataclass(frozen=True)
class ForbiddenEntry:
    delta: int
    value: int
    polynomial: IntPolynomial


@dataclass(frozen=True)
class ForbiddenSet:
    h: int
    p: int
    entries: tuple[ForbiddenEntry, ...]

    @property
    def values(self) -> list[int]:
        return [e.value for e in self.entries]


@dataclass(frozen=True)
class CandidateSet:
    p: int
    h: int
    divisors: tuple[int, ...]

    def __len__(self):
        return len(self.divisors)


def forbidden_polynomial(h: int, delta: int) -> IntPolynomial:
    """D_{h,delta}(X) = (X^h - 1) / Phi_delta(X)."""
    if h % delta:
        raise ValueError(f"{delta} does not divide {h}")
    return x_pow_minus_one(h).exact_div(cyclotomic_poly(delta))


def forbidden_divisors(h: int, p: int) -> ForbiddenSet:
    if h < 1:
        raise ValueError("h must be positive")
    total = p**h - 1
    entries = []
    for delta in divisors_of_int(h):
        poly = forbidden_polynomial(h, delta)
        value = total // cyclotomic_value(delta, p)
        assert poly(p) == value
        entries.append(ForbiddenEntry(delta, value, poly))
    return ForbiddenSet(h, p, tuple(entries))


def _poly_key(poly: IntPolynomial):
    return (poly.degree, tuple(reversed(poly.coefficients)))


def polynomial_divisor_lattice(h: int, proper: bool = False) -> list[IntPolynomial]:
    """Products of cyclotomic factors of X^h - 1 over subsets of divisors of h.

    With ``proper=True`` the full product X^h - 1 is left out (only strict
    subsets), which is the list of nontrivial polynomial divisors.
    Sorted by degree, then by coefficients from the leading term down.
    """
    if h < 1:
        raise ValueError("h must be positive")
    ds = divisors_of_int(h)
    seen = {}
    top = len(ds) - 1 if proper else len(ds)
    for k in range(top + 1):
        for subset in combinations(ds, k):
            poly = IntPolynomial((1,))
            for d in subset:
                poly = poly * cyclotomic_poly(d)
            seen[poly.coefficients] = poly
    return sorted(seen.values(), key=_poly_key)


def _factored_parts(h: int, p: int, budget=None, seed=0) -> tuple[FactoredInteger, dict[int, FactoredInteger]]:
    parts = factor_cyclotomic_values(h, p, budget, seed)
    total = FactoredInteger(1)
    for f in parts.values():
        total = total * f
    return total, parts


def _quotient(total: FactoredInteger, part: FactoredInteger) -> FactoredInteger:
    exps = total.as_dict()
    for q, e in part.factors:
        exps[q] -= e
    return FactoredInteger.from_dict(exps, total.probable)


def impossible_divisors(h: int, p: int, budget=None, seed=0) -> list[int]:
    """Union of the divisors of every D_{h,delta}(p), ascending."""
    total, parts = _factored_parts(h, p, budget, seed)
    out: set[int] = set()
    for f in parts.values():
        out.update(divisors(_quotient(total, f)))
    return sorted(out)


def admissible_divisors(h: int, p: int, budget=None, seed=0) -> tuple[list[int], int]:
    """Divisors of p^h - 1 dividing no D_{h,delta}(p), and the total divisor count."""
    total, parts = _factored_parts(h, p, budget, seed)
    forbidden_vals = [total.value // cyclotomic_value(d, p) for d in parts]
    every = divisors(total)
    possible = [d for d in every if all(v % d for v in forbidden_vals)]
    return possible, len(every)


def candidate_factorization(h: int, p: int, budget=None, seed=0) -> FactoredInteger:
    """Factorization of p^h - 1, via the coprime split when h == 2."""
    if h == 2 and p % 2 == 1:
        fa, fb = factor_p2_minus_one(p, budget, seed)
        return fa * fb
    total, _ = _factored_parts(h, p, budget, seed)
    return total


def candidate_set(h: int, p: int, limit: int | None = None, budget=None, seed=0) -> CandidateSet:
    """Divisors D of p^h - 1 with D < p (or D <= limit) dividing no D_{h,delta}(p)."""
    if h < 1:
        raise ValueError("h must be positive")
    cap = p - 1 if limit is None else limit
    if h == 1:
        return CandidateSet(p, h, ())
    total = candidate_factorization(h, p, budget, seed)
    forbidden_vals = [e.value for e in forbidden_divisors(h, p).entries]
    kept = tuple(d for d in divisors(total, cap) if all(v % d for v in forbidden_vals))
    return CandidateSet(p, h, kept)
