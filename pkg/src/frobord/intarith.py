"""Exact integer arithmetic: primality, factorization, divisors, cyclotomic values."""

from __future__ import annotations

import math
import os
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import BudgetExceeded

TRIAL_BOUND = 10**5
DEFAULT_BUDGET = 5 * 10**7
# Miller-Rabin with the first 13 prime bases is exact below this value.
_DETERMINISTIC_LIMIT = 3317044064679887385961981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_PROBABLE_ROUNDS = 64


def _small_primes(limit: int) -> tuple[int, ...]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, limit + 1, i)))
    return tuple(i for i in range(limit + 1) if sieve[i])


SMALL_PRIMES = _small_primes(TRIAL_BOUND)
_SMALL_SET = frozenset(SMALL_PRIMES[:1000])


def _strong_probable_prime(n: int, d: int, s: int, a: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def primality(n: int) -> str:
    """Classify ``n`` as ``"prime"``, ``"probable"`` or ``"composite"``.

    Exact below 3.3e24 (covers every n < 2**64). Larger inputs get 64 strong
    rounds with seeded random bases, error below 2**-128, and are reported as
    ``"probable"``.
    """
    if n < 2:
        return "composite"
    if n in _SMALL_SET:
        return "prime"
    for q in SMALL_PRIMES[:60]:
        if n % q == 0:
            return "composite"
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if n < _DETERMINISTIC_LIMIT:
        for a in _MR_BASES:
            if not _strong_probable_prime(n, d, s, a):
                return "composite"
        return "prime"
    rng = random.Random(n)
    for _ in range(_PROBABLE_ROUNDS):
        a = rng.randrange(2, n - 1)
        if not _strong_probable_prime(n, d, s, a):
            return "composite"
    return "probable"


def is_prime(n: int) -> bool:
    return primality(n) != "composite"


def pow_mod(base: int, exp: int, modulus: int) -> int:
    if modulus < 1:
        raise ValueError("modulus must be positive")
    if exp < 0:
        raise ValueError("exponent must be nonnegative")
    return pow(base, exp, modulus)


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n)."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


@dataclass(frozen=True)
class FactoredInteger:
    """An integer with its prime factorization, primes ascending."""

    value: int
    factors: tuple[tuple[int, int], ...] = ()
    probable: bool = False

    def __post_init__(self):
        factors = tuple((int(q), int(e)) for q, e in self.factors)
        object.__setattr__(self, "factors", factors)
        prod = 1
        last = 1
        for q, e in factors:
            if q <= last:
                raise ValueError(f"primes not strictly increasing: {factors}")
            if e <= 0:
                raise ValueError(f"nonpositive exponent for {q}")
            prod *= q**e
            last = q
        if prod != self.value:
            raise ValueError(f"factors multiply to {prod}, not {self.value}")

    @classmethod
    def from_dict(cls, exps: dict[int, int], probable: bool = False) -> FactoredInteger:
        items = tuple(sorted((q, e) for q, e in exps.items() if e))
        value = 1
        for q, e in items:
            value *= q**e
        return cls(value, items, probable)

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(q for q, _ in self.factors)

    def num_divisors(self) -> int:
        return math.prod(e + 1 for _, e in self.factors)

    def __mul__(self, other: FactoredInteger) -> FactoredInteger:
        exps = self.as_dict()
        for q, e in other.factors:
            exps[q] = exps.get(q, 0) + e
        return FactoredInteger.from_dict(exps, self.probable or other.probable)

    def certified(self) -> bool:
        """True when every listed prime passes :func:`is_prime`."""
        return all(is_prime(q) for q, _ in self.factors)

    def pari(self) -> str:
        """Factor-matrix rendering ``[2,2;3,1]``."""
        return "[" + ";".join(f"{q},{e}" for q, e in self.factors) + "]"


def _budget_from_env() -> int:
    raw = os.environ.get("FROBORD_BUDGET")
    if raw:
        try:
            return int(float(raw))
        except ValueError:
            pass
    return DEFAULT_BUDGET


class _Budget:
    __slots__ = ("left",)

    def __init__(self, total: int):
        self.left = total

    def spend(self, k: int, n: int):
        self.left -= k
        if self.left < 0:
            raise BudgetExceeded(f"factorization work budget exhausted on {n}")


def _brent(n: int, rng: random.Random, budget: _Budget) -> int:
    """Return a nontrivial factor of composite odd n (Brent's rho variant)."""
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                steps = min(m, r - k)
                for _ in range(steps):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                budget.spend(steps, n)
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
                budget.spend(1, n)
        if g != n:
            return g


def factorize(n: int, budget: int | None = None, seed: int = 0) -> FactoredInteger:
    """Complete prime factorization of ``n >= 1``.

    Trial division by primes below 10**5, then Brent-Pollard rho with a seeded
    generator. Raises BudgetExceeded once ``budget`` rho iterations are spent
    (default from FROBORD_BUDGET, else 5e7).
    """
    if n < 1:
        raise ValueError("factorize needs n >= 1")
    exps: dict[int, int] = {}
    for q in SMALL_PRIMES:
        if q * q > n:
            break
        if n % q == 0:
            e = 0
            while n % q == 0:
                n //= q
                e += 1
            exps[q] = e
    if n == 1:
        return FactoredInteger.from_dict(exps)
    if n < TRIAL_BOUND * TRIAL_BOUND:
        exps[n] = exps.get(n, 0) + 1
        return FactoredInteger.from_dict(exps)
    work = _Budget(_budget_from_env() if budget is None else budget)
    rng = random.Random(seed)
    probable = False
    stack = [n]
    while stack:
        m = stack.pop()
        status = primality(m)
        if status != "composite":
            probable = probable or status == "probable"
            exps[m] = exps.get(m, 0) + 1
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack += [r, r]
            continue
        g = _brent(m, rng, work)
        stack += [g, m // g]
    return FactoredInteger.from_dict(exps, probable)


def factor_product(parts: Iterable[int], budget: int | None = None, seed: int = 0) -> FactoredInteger:
    """Factor a product by factoring each (positive) part and merging."""
    out = FactoredInteger(1)
    for part in parts:
        out = out * factorize(part, budget, seed)
    return out


def divisors(f: FactoredInteger, limit: int | None = None) -> list[int]:
    """All divisors of ``f.value`` ascending; only those <= limit if given.

    The exponent lattice is walked prime by prime and branches above the limit
    are cut, so nothing larger than ``limit`` is ever produced.
    """
    if limit is None:
        divs = [1]
        for q, e in f.factors:
            powers = [q**k for k in range(1, e + 1)]
            divs = divs + [d * qk for qk in powers for d in divs]
        divs.sort()
        return divs
    if limit < 1:
        return []
    divs = [1]
    for q, e in f.factors:
        if q > limit:
            break
        new = []
        for d in divs:
            x = d
            for _ in range(e):
                x *= q
                if x > limit:
                    break
                new.append(x)
        divs += new
    divs.sort()
    return divs


def divisors_with_phi(f: FactoredInteger, limit: int | None = None) -> list[tuple[int, int]]:
    """Pairs (d, phi(d)) for divisors d of f.value (<= limit), ascending in d."""
    pairs = [(1, 1)]
    for q, e in f.factors:
        if limit is not None and q > limit:
            break
        new = []
        for d, ph in pairs:
            x, y = d * q, ph * (q - 1)
            for _ in range(e):
                if limit is not None and x > limit:
                    break
                new.append((x, y))
                x *= q
                y *= q
        pairs += new
    pairs.sort()
    return pairs


def euler_phi(f: FactoredInteger | int) -> int:
    if not isinstance(f, FactoredInteger):
        f = factorize(f)
    if f.value < 1:
        raise ValueError("phi needs a positive integer")
    out = 1
    for q, e in f.factors:
        out *= (q - 1) * q ** (e - 1)
    return out


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial, coefficients constant term first."""

    coefficients: tuple[int, ...]

    def __post_init__(self):
        c = [int(x) for x in self.coefficients]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coefficients", tuple(c))

    @classmethod
    def of(cls, *coeffs: int) -> IntPolynomial:
        return cls(tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def leading(self) -> int:
        return self.coefficients[-1] if self.coefficients else 0

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def __mul__(self, other: IntPolynomial) -> IntPolynomial:
        a, b = self.coefficients, other.coefficients
        if not a or not b:
            return IntPolynomial(())
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return IntPolynomial(tuple(out))

    def exact_div(self, other: IntPolynomial) -> IntPolynomial:
        """Quotient by a monic-or-unit-leading divisor; raises if inexact."""
        num = list(self.coefficients)
        den = other.coefficients
        if not den:
            raise ZeroDivisionError("division by zero polynomial")
        lead = den[-1]
        if len(num) < len(den):
            if any(num):
                raise ValueError("inexact polynomial division")
            return IntPolynomial(())
        quot = [0] * (len(num) - len(den) + 1)
        for k in range(len(quot) - 1, -1, -1):
            c, r = divmod(num[k + len(den) - 1], lead)
            if r:
                raise ValueError("inexact polynomial division")
            quot[k] = c
            if c:
                for j, d in enumerate(den):
                    num[k + j] -= c * d
        if any(num):
            raise ValueError("inexact polynomial division")
        return IntPolynomial(tuple(quot))

    def __str__(self) -> str:
        if not self.coefficients:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coefficients[k]
            if not c:
                continue
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                mono = "X" if k == 1 else f"X^{k}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def x_pow_minus_one(h: int) -> IntPolynomial:
    return IntPolynomial((-1,) + (0,) * (h - 1) + (1,))


def divisors_of_int(n: int) -> list[int]:
    """Ascending divisors of a small positive int (for divisor-of-h loops)."""
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


@lru_cache(maxsize=None)
def cyclotomic_poly(delta: int) -> IntPolynomial:
    """The delta-th cyclotomic polynomial via (X^delta - 1) / prod_{d|delta, d<delta} Phi_d."""
    if delta < 1:
        raise ValueError("delta must be positive")
    poly = x_pow_minus_one(delta)
    for d in divisors_of_int(delta)[:-1]:
        poly = poly.exact_div(cyclotomic_poly(d))
    return poly


def cyclotomic_value(delta: int, p: int) -> int:
    return cyclotomic_poly(delta)(p)


def factor_cyclotomic_values(h: int, p: int, budget: int | None = None, seed: int = 0) -> dict[int, FactoredInteger]:
    """Factorizations of Phi_delta(p) for every delta | h (p >= 2)."""
    return {d: factorize(abs(cyclotomic_value(d, p)), budget, seed) for d in divisors_of_int(h)}


def factor_p_power_minus_one(h: int, p: int, budget: int | None = None, seed: int = 0) -> FactoredInteger:
    """Factorization of p^h - 1 merged from its cyclotomic parts."""
    out = FactoredInteger(1)
    for f in factor_cyclotomic_values(h, p, budget, seed).values():
        out = out * f
    return out


def factor_p2_minus_one(p: int, budget: int | None = None, seed: int = 0) -> tuple[FactoredInteger, FactoredInteger]:
    """Coprime split p^2 - 1 = 2(p - e) * (p + e)/2 with e = (-4/p), p odd.

    Returns the two factorizations; their product is p^2 - 1 and they share
    no prime.
    """
    if p % 2 == 0 or p < 3:
        raise ValueError("coprime split needs an odd prime")
    e = 1 if p % 4 == 1 else -1
    a, b = 2 * (p - e), (p + e) // 2
    fa, fb = factorize(a, budget, seed), factorize(b, budget, seed)
    if __debug__:
        assert a * b == p * p - 1 and math.gcd(a, b) == 1
    return fa, fb


def prod_factored(parts: Sequence[FactoredInteger]) -> FactoredInteger:
    out = FactoredInteger(1)
    for f in parts:
        out = out * f
    return out
