import math

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from frobord.errors import BudgetExceeded
from frobord.intarith import (
    FactoredInteger,
    IntPolynomial,
    cyclotomic_poly,
    cyclotomic_value,
    divisors,
    divisors_of_int,
    divisors_with_phi,
    euler_phi,
    factor_p2_minus_one,
    factor_p_power_minus_one,
    factorize,
    is_prime,
    kronecker,
    primality,
    x_pow_minus_one,
)
from frobord.primes import chunk_ranges, iter_primes, primes_between


def test_small_primality_matches_sympy():
    for n in range(-5, 5000):
        assert is_prime(n) == sympy.isprime(n), n


def test_strong_pseudoprimes_rejected():
    # 3215031751 fools bases 2, 3, 5, 7
    for n in (3215031751, 2152302898747, 3474749660383, 341550071728321, 3825123056546413051):
        assert primality(n) == "composite"


def test_large_prime_classes():
    assert primality(2**61 - 1) == "prime"
    assert primality(2**127 - 1) == "probable"
    assert primality((2**127 - 1) * (2**61 - 1)) == "composite"


@given(st.integers(min_value=1, max_value=10**15))
@settings(max_examples=200, deadline=None)
def test_factorize_roundtrip(n):
    f = factorize(n)
    assert f.value == n
    assert f.as_dict() == sympy.factorint(n)


def test_factorize_semiprime_needs_rho():
    p, q = 1000003, 999999000001
    f = factorize(p * q)
    assert f.as_dict() == {p: 1, q: 1}
    assert f.certified()


def test_budget_exceeded():
    n = 1000000007 * 998244353
    with pytest.raises(BudgetExceeded):
        factorize(n, budget=3)


def test_budget_from_env(monkeypatch):
    monkeypatch.setenv("FROBORD_BUDGET", "2")
    with pytest.raises(BudgetExceeded):
        factorize(1000000007 * 998244353)


def test_seed_independent_result():
    n = 1000000007 * 998244353 * 1000003
    assert factorize(n, seed=1) == factorize(n, seed=99)


def test_pari_rendering():
    assert factorize(12).pari() == "[2,2;3,1]"
    assert factorize(14).pari() == "[2,1;7,1]"


@given(st.integers(min_value=1, max_value=10**9), st.integers(min_value=1, max_value=10**6))
@settings(max_examples=100, deadline=None)
def test_divisors_against_sympy(n, limit):
    f = factorize(n)
    full = sorted(sympy.divisors(n))
    assert divisors(f) == full
    assert divisors(f, limit) == [d for d in full if d <= limit]
    assert [d for d, _ in divisors_with_phi(f, limit)] == [d for d in full if d <= limit]
    assert all(ph == sympy.totient(d) for d, ph in divisors_with_phi(f, limit))


def test_euler_phi():
    for n in range(1, 500):
        assert euler_phi(n) == sympy.totient(n)


def test_kronecker_matches_sympy():
    for n in range(1, 60, 2):
        for a in range(-30, 31):
            assert kronecker(a, n) == sympy.jacobi_symbol(a, n), (a, n)
    # even moduli: (a/2) is 0 for even a, +1 for a = +-1 mod 8, -1 for a = +-3 mod 8
    for a in range(-30, 31):
        expect = 0 if a % 2 == 0 else (1 if a % 8 in (1, 7) else -1)
        assert kronecker(a, 2) == expect


def test_cyclotomic_polys_match_sympy():
    x = sympy.Symbol("x")
    for d in range(1, 40):
        ref = sympy.Poly(sympy.cyclotomic_poly(d, x), x).all_coeffs()[::-1]
        assert list(cyclotomic_poly(d).coefficients) == [int(c) for c in ref]


def test_cyclotomic_product_identity():
    # X^h - 1 is the product of Phi_d over d | h, checked at integers
    for h in range(1, 13):
        for p in iter_primes(2, 1000):
            assert math.prod(cyclotomic_value(d, p) for d in divisors_of_int(h)) == p**h - 1


def test_polynomial_exact_division():
    for h in range(1, 13):
        q = x_pow_minus_one(h)
        for d in divisors_of_int(h):
            q = q.exact_div(cyclotomic_poly(d))
        assert q == IntPolynomial.of(1)
    with pytest.raises(ValueError):
        IntPolynomial.of(1, 0, 1).exact_div(IntPolynomial.of(-1, 1))


def test_factor_p_power_minus_one():
    for h, p in ((1, 13), (2, 101), (3, 1093), (4, 97), (6, 7)):
        assert factor_p_power_minus_one(h, p).value == p**h - 1
        assert factor_p_power_minus_one(h, p).as_dict() == sympy.factorint(p**h - 1)


def test_coprime_split():
    for p in iter_primes(3, 3000):
        a, b = factor_p2_minus_one(p)
        assert a.value * b.value == p * p - 1
        assert math.gcd(a.value, b.value) == 1


def test_sieve_matches_sympy():
    assert primes_between(0, 10000).tolist() == list(sympy.primerange(0, 10001))
    lo, hi = 10**9, 10**9 + 5000
    assert list(iter_primes(lo, hi)) == list(sympy.primerange(lo, hi + 1))


def test_chunks_cover():
    pieces = chunk_ranges(5, 1000, 97)
    assert pieces[0][0] == 5 and pieces[-1][1] == 1000
    assert all(b + 1 == c for (_, b), (c, _) in zip(pieces, pieces[1:]))


def test_factored_integer_product():
    a, b = factorize(12), factorize(45)
    assert (a * b).as_dict() == {2: 2, 3: 3, 5: 1}
    assert FactoredInteger(1).value == 1
