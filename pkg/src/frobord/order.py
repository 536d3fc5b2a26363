"""Multiplicative orders modulo p and modulo the primes above p, with Archimedean lower bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import NotInvertible, RamifiedPrime, RankDeficient, UnsupportedGroup
from .forbidden import forbidden_divisors, forbidden_polynomial
from .intarith import (
    FactoredInteger,
    IntPolynomial,
    cyclotomic_value,
    divisors_of_int,
    factor_p_power_minus_one,
    is_prime,
)
from .numfield import (
    AlgebraicNumber,
    FieldSpec,
    frobenius_index,
    group_ring_house,
    powmod_poly,
    rank_check,
    reduce,
    reduction_data,
    splitting_data,
    squarefree_mod_p,
)


@dataclass(frozen=True)
class OrderResult:
    p: int
    n_p: int
    g_p: int
    order: int
    gcd_profile: tuple[tuple[int, int], ...]
    forbidden_hit: int | None = None

    def profile(self) -> dict[int, int]:
        return dict(self.gcd_profile)


def _is_one(y: Sequence[int]) -> bool:
    return y[0] == 1 and not any(y[1:])


def element_order(y: Sequence[int], group: FactoredInteger, low: Sequence[int], p: int) -> int:
    """Order of the unit y in Z[x]/(f, p), given the factored exponent of the unit group.

    Raises NotInvertible if y^exponent != 1 (y is a zero divisor).
    """
    o = group.value
    if not _is_one(powmod_poly(y, o, low, p)):
        raise NotInvertible(f"residue {tuple(y)} is not a unit modulo {p}")
    for q, e in group.factors:
        for _ in range(e):
            if o % q == 0 and _is_one(powmod_poly(y, o // q, low, p)):
                o //= q
            else:
                break
    for q, _ in group.factors:
        if o % q == 0:
            assert not _is_one(powmod_poly(y, o // q, low, p)), "order is not minimal"
    return o


def gcd_profile(order: int, n_p: int, p: int) -> tuple[tuple[int, int], ...]:
    return tuple((d, math.gcd(order, cyclotomic_value(d, p))) for d in divisors_of_int(n_p))


def forbidden_hit(order: int, n_p: int, p: int) -> int | None:
    """Smallest delta | n_p with order dividing D_{n_p,delta}(p)."""
    for e in forbidden_divisors(n_p, p).entries:
        if e.value % order == 0:
            return e.delta
    return None


def order_mod_p(eta: AlgebraicNumber, p: int, budget=None, seed: int = 0) -> OrderResult:
    """Exact multiplicative order of eta in Z[x]/(P, p)."""
    spec = eta.spec
    split = splitting_data(spec, p)
    y = reduce(eta, p).coefficients
    low = reduction_data(spec.polynomial, p)
    group = factor_p_power_minus_one(split.n_p, p, budget, seed)
    o = element_order(y, group, low, p)
    assert group.value % o == 0
    return OrderResult(p, split.n_p, split.g_p, o, gcd_profile(o, split.n_p, p), forbidden_hit(o, split.n_p, p))


def _gf_factors(poly: IntPolynomial, p: int) -> list[list[int]]:
    from sympy.polys.domains import ZZ
    from sympy.polys.galoistools import gf_factor_sqf

    _, factors = gf_factor_sqf([c % p for c in reversed(poly.coefficients)], p, ZZ)
    return [[int(c) for c in reversed(f)] for f in factors]


def order_mod_frakp(poly: IntPolynomial, eta_coeffs: Sequence, p: int, budget=None, seed: int = 0) -> list[tuple[int, int]]:
    """(degree, order) of eta modulo each irreducible factor of P mod p, sorted.

    ``eta_coeffs`` are integers (constant first) or an AlgebraicNumber.
    """
    if isinstance(eta_coeffs, AlgebraicNumber):
        eta = reduce(eta_coeffs, p).coefficients
    else:
        eta = [int(c) % p for c in eta_coeffs]
    if not squarefree_mod_p(poly, p):
        raise RamifiedPrime(f"{poly} is not squarefree modulo {p}")
    out = []
    for f in _gf_factors(poly, p):
        k = len(f) - 1
        fpoly = IntPolynomial(tuple(f))
        low = reduction_data(fpoly, p)
        y = _reduce_mod(eta, f, p)
        if not any(y):
            raise NotInvertible(f"eta vanishes modulo a prime above {p}")
        out.append((k, element_order(y, factor_p_power_minus_one(k, p, budget, seed), low, p)))
    return sorted(out)


def _reduce_mod(c: Sequence[int], f: Sequence[int], p: int) -> tuple[int, ...]:
    k = len(f) - 1
    c = [x % p for x in c] + [0] * max(0, k - len(c))
    for i in range(len(c) - 1, k - 1, -1):
        lead = c[i]
        if lead:
            for j in range(k + 1):
                c[i - k + j] = (c[i - k + j] - lead * f[j]) % p
    return tuple(c[:k])


def gcd_identity_check(result: OrderResult) -> bool:
    """o = g1*g3/3 when p = 1 mod 3, else o = g1*g3, for the profile (g1, g3) of a cubic inert prime."""
    if result.n_p != 3:
        raise ValueError("identity applies to n_p = 3")
    prof = result.profile()
    g1, g3 = prof[1], prof[3]
    if result.p % 3 == 1:
        return 3 * result.order == g1 * g3
    return result.order == g1 * g3


def lower_bound_order(p: int, nu: int, c0: float) -> float:
    """Least k compatible with eta^k = 1 mod p, from the size of the conjugates."""
    if nu == 1:
        if c0 <= 1:
            raise ValueError("need c0 > 1 for an algebraic integer")
        return math.log(p - 1) / math.log(c0)
    denom = max(math.log(nu * c0), math.log(nu))
    return (math.log(p) - math.log(2)) / denom


def _generator_of_order(spec: FieldSpec, n_p: int) -> int:
    for i in range(1, spec.degree):
        if spec.map_order(i) == n_p:
            return i
    if n_p == 1:
        return 0
    raise UnsupportedGroup(f"no conjugation map of order {n_p} in {spec.name}")


def residual_factor_bound(spec: FieldSpec, eta: AlgebraicNumber, p: int, delta: int, n_p: int | None = None, generator: int | None = None) -> float:
    """Lower bound on r in o_p(eta) = r*d with d | D_{n_p,delta}(p) and r | Phi_delta(p).

    s defaults to the Frobenius map at p when p is an unramified prime of the
    spec, otherwise to the first map of order n_p.
    """
    if eta.denominator != 1:
        raise ValueError("eta must be an algebraic integer combination (nu = 1)")
    if n_p is None:
        n_p = splitting_data(spec, p).n_p
    if generator is None:
        generator = None
        if is_prime(p) and p not in spec.bad_primes:
            idx = frobenius_index(spec, p)
            if idx is not None and spec.map_order(idx) == n_p:
                generator = idx
        if generator is None:
            generator = _generator_of_order(spec, n_p)
    elif spec.map_order(generator) != n_p:
        raise UnsupportedGroup(f"map {generator} does not have order {n_p}")
    exps = forbidden_polynomial(n_p, delta).coefficients
    c0 = group_ring_house(eta, exps, generator)
    if c0 <= 1:
        return math.inf
    return math.log(p - 1) / math.log(c0)


@dataclass
class ForbiddenReport:
    checked: int = 0
    violations: list[tuple[int, int, int]] = field(default_factory=list)
    allowed: frozenset = frozenset()

    @property
    def primes(self) -> list[int]:
        return [v[0] for v in self.violations]

    @property
    def unexpected(self) -> list[int]:
        return [p for p in self.primes if p not in self.allowed]

    @property
    def ok(self) -> bool:
        return not self.unexpected


def verify_forbidden(eta: AlgebraicNumber, primes: Iterable[int], exceptions_allowed: Iterable[int] = (), budget=None, seed: int = 0) -> ForbiddenReport:
    """Check that o_p(eta) divides no forbidden divisor, for the non-split good primes given."""
    if not rank_check(eta):
        raise RankDeficient(f"{eta} does not generate a module of full rank")
    spec = eta.spec
    report = ForbiddenReport(allowed=frozenset(exceptions_allowed))
    for p in primes:
        if p in spec.bad_primes or eta.denominator % p == 0:
            continue
        if splitting_data(spec, p).n_p == 1:
            continue
        try:
            res = order_mod_p(eta, p, budget, seed)
        except NotInvertible:
            continue
        report.checked += 1
        if res.forbidden_hit is not None:
            report.violations.append((p, res.order, res.forbidden_hit))
    return report
