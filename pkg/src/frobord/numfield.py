"""Galois number fields given by a defining polynomial and explicit conjugation maps.

Elements are rational-coefficient polynomials in the generator x modulo P.
Everything modulo a prime p happens in Z[x]/(P mod p); splitting data comes
from iterating Frobenius on x, never from class-field data.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

import mpmath

from .errors import BadPrime, RamifiedPrime, SpecInvalid, UnsupportedGroup
from .intarith import IntPolynomial, factorize, is_prime

RootPoly = tuple[Fraction, ...]


# -- rational polynomial arithmetic modulo a monic integer polynomial -------


def _trim(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    return c


def _pad(c: Sequence, n: int) -> tuple:
    c = tuple(c)
    if len(c) > n:
        raise ValueError(f"{len(c)} coefficients for degree {n}")
    return c + (0,) * (n - len(c))


def _reduce_q(c: list, poly: Sequence[int]) -> list:
    n = len(poly) - 1
    c = list(c)
    for k in range(len(c) - 1, n - 1, -1):
        lead = c[k]
        if lead:
            for i in range(n + 1):
                c[k - n + i] -= lead * poly[i]
    c = c[:n]
    return c + [0] * (n - len(c))


def _mul_q(a: Sequence, b: Sequence, poly: Sequence[int]) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _reduce_q(out, poly)


def _compose_q(f: Sequence, g: Sequence, poly: Sequence[int]) -> list:
    """f(g(X)) mod poly."""
    n = len(poly) - 1
    acc = [Fraction(0)] * n
    for c in reversed(f):
        acc = _mul_q(acc, g, poly)
        acc[0] += c
    return acc


def _poly_mod_p(c: Sequence[int], p: int) -> list[int]:
    return [x % p for x in c]


# -- F_p polynomial helpers --------------------------------------------------


def _pdivmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    a = _trim([x % p for x in a])
    b = _trim([x % p for x in b])
    if not b:
        raise ZeroDivisionError
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        c = a[-1] * inv % p
        k = len(a) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            a[k + i] = (a[k + i] - c * y) % p
        _trim(a)
    return q, a


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a = _trim([x % p for x in a])
    b = _trim([x % p for x in b])
    while b:
        a, b = b, _pdivmod(a, b, p)[1]
    return a


def squarefree_mod_p(poly: IntPolynomial, p: int) -> bool:
    c = list(poly.coefficients)
    deriv = [i * c[i] for i in range(1, len(c))]
    if not _trim([x % p for x in deriv]):
        return False
    return len(_pgcd(c, deriv, p)) == 1


# -- residue ring Z[x]/(P, p) ------------------------------------------------


def reduction_data(poly: IntPolynomial, p: int) -> tuple[int, ...]:
    """Coefficients r_i with X^n = sum r_i X^i modulo (P, p)."""
    c = poly.coefficients
    return tuple(-x % p for x in c[:-1])


def mulmod(a: Sequence[int], b: Sequence[int], low: Sequence[int], p: int) -> tuple[int, ...]:
    n = len(low)
    prod = [0] * (2 * n - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    for k in range(2 * n - 2, n - 1, -1):
        c = prod[k] % p
        if c:
            base = k - n
            for i, r in enumerate(low):
                prod[base + i] += c * r
    return tuple(v % p for v in prod[:n])


def powmod_poly(a: Sequence[int], k: int, low: Sequence[int], p: int) -> tuple[int, ...]:
    n = len(low)
    result = (1,) + (0,) * (n - 1)
    if k == 0:
        return tuple(x % p for x in result)
    base = tuple(x % p for x in a)
    for bit in bin(k)[2:]:
        result = mulmod(result, result, low, p)
        if bit == "1":
            result = mulmod(result, base, low, p)
    return result


# -- domain types -------------------------------------------------------------


@dataclass(frozen=True)
class FieldSpec:
    name: str
    degree: int
    polynomial: IntPolynomial
    conjugation_maps: tuple[RootPoly, ...] | None
    bad_primes: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "bad_primes", tuple(sorted(set(int(q) for q in self.bad_primes))))
        if self.conjugation_maps is not None:
            maps = tuple(tuple(Fraction(x) for x in _pad(m, self.degree)) for m in self.conjugation_maps)
            object.__setattr__(self, "conjugation_maps", maps)
        _validate(self)

    @property
    def galois(self) -> bool:
        return self.conjugation_maps is not None

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.polynomial.coefficients

    def generator(self) -> AlgebraicNumber:
        return AlgebraicNumber(self, (0, 1) if self.degree > 1 else (0,), 1)

    def element(self, coeffs: Sequence, denominator: int = 1) -> AlgebraicNumber:
        return AlgebraicNumber.from_rationals(self, [Fraction(c, denominator) for c in coeffs])

    def compose_index(self, i: int, j: int) -> int:
        """Index of the map X -> sigma_i(sigma_j(X))."""
        return _group_table(self)[i][j]

    def map_order(self, i: int) -> int:
        k, j = 1, i
        while j != 0:
            j = self.compose_index(j, i)
            k += 1
        return k

    def __hash__(self):
        return hash((self.name, self.polynomial, self.conjugation_maps))


def _require(cond: bool, msg: str):
    if not cond:
        raise SpecInvalid(msg)


def polynomial_discriminant(poly: IntPolynomial) -> int:
    import sympy

    x = sympy.Symbol("x")
    expr = sum(c * x**i for i, c in enumerate(poly.coefficients))
    return int(sympy.discriminant(expr, x))


def _is_irreducible(poly: IntPolynomial) -> bool:
    import sympy

    x = sympy.Symbol("x")
    return sympy.Poly(list(reversed(poly.coefficients)), x, domain="ZZ").is_irreducible


def _validate(spec: FieldSpec):
    P = spec.polynomial
    n = spec.degree
    _require(n >= 1, "degree must be positive")
    _require(P.degree == n, f"polynomial degree {P.degree} != declared degree {n}")
    _require(P.leading == 1, "polynomial must be monic")
    _require(_is_irreducible(P), "polynomial is reducible over Q")
    for q in spec.bad_primes:
        _require(is_prime(q), f"bad prime {q} is not prime")
    disc = polynomial_discriminant(P)
    missing = [q for q, _ in factorize(abs(disc)).factors if q not in spec.bad_primes]
    _require(not missing, f"primes {missing} divide disc(P) = {disc} but are not listed as bad")
    maps = spec.conjugation_maps
    if maps is None:
        return
    _require(len(maps) == n, f"expected {n} conjugation maps, got {len(maps)}")
    ident = tuple(Fraction(int(k == 1)) for k in range(n)) if n > 1 else (Fraction(0),)
    _require(n == 1 or maps[0] == ident, "conjugation map 0 must be the identity X")
    coeffs = P.coefficients
    for i, m in enumerate(maps):
        image = _compose_q([Fraction(c) for c in coeffs[:-1]] + [Fraction(coeffs[-1])], m, coeffs) if n > 1 else [0]
        _require(not any(image), f"conjugation map {i} is not a root map: P(sigma_{i}(X)) != 0 mod P")
    _require(len(set(maps)) == n, "conjugation maps are not pairwise distinct")
    index = {m: i for i, m in enumerate(maps)}
    for i, a in enumerate(maps):
        for j, b in enumerate(maps):
            c = tuple(_compose_q(a, b, coeffs)) if n > 1 else a
            _require(c in index, f"maps {i} and {j} compose outside the list")


@lru_cache(maxsize=64)
def _group_table(spec: FieldSpec) -> tuple[tuple[int, ...], ...]:
    if not spec.galois:
        raise UnsupportedGroup(f"{spec.name}: no conjugation maps (not Galois)")
    maps = spec.conjugation_maps
    index = {m: i for i, m in enumerate(maps)}
    if spec.degree == 1:
        return ((0,),)
    return tuple(tuple(index[tuple(_compose_q(a, b, spec.coeffs))] for b in maps) for a in maps)


def _parse_rational(x) -> Fraction:
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise SpecInvalid(f"not a rational literal: {x!r}")


def load_spec(document) -> FieldSpec:
    """Build a validated FieldSpec from a mapping, a JSON string or a file path."""
    if isinstance(document, Path) or (isinstance(document, str) and not document.lstrip().startswith("{")):
        document = json.loads(Path(document).read_text())
    elif isinstance(document, str):
        document = json.loads(document)
    if not isinstance(document, Mapping):
        raise SpecInvalid("field spec must be a mapping")
    try:
        name = str(document["name"])
        degree = int(document["degree"])
        poly = IntPolynomial(tuple(int(c) for c in document["polynomial"]))
        raw_maps = document.get("conjugation_maps")
        bad = tuple(int(q) for q in document.get("bad_primes", ()))
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecInvalid(f"malformed field spec: {exc}") from exc
    if len(document["polynomial"]) != degree + 1:
        raise SpecInvalid(f"polynomial needs {degree + 1} coefficients")
    maps = None
    if raw_maps is not None:
        try:
            maps = tuple(tuple(_parse_rational(x) for x in m) for m in raw_maps)
        except (ValueError, ZeroDivisionError) as exc:
            raise SpecInvalid(f"bad conjugation map literal: {exc}") from exc
    return FieldSpec(name, degree, poly, maps, bad)


def spec_document(spec: FieldSpec) -> dict:
    doc = {
        "name": spec.name,
        "degree": spec.degree,
        "polynomial": list(spec.coeffs),
        "bad_primes": list(spec.bad_primes),
    }
    if spec.galois:
        doc["conjugation_maps"] = [[str(c) for c in m] for m in spec.conjugation_maps]
    return doc


SHIPPED = ("quad3", "quad2", "quadm1", "cubic7", "quartic17", "cbrt2")


@lru_cache(maxsize=None)
def builtin_spec(name: str) -> FieldSpec:
    if name not in SHIPPED:
        raise SpecInvalid(f"unknown built-in field {name!r}; choose from {', '.join(SHIPPED)}")
    text = resources.files("frobord.fields").joinpath(f"{name}.json").read_text()
    return load_spec(text)


def resolve_spec(ref: str) -> FieldSpec:
    """A built-in name or a path to a field-spec document."""
    if ref in SHIPPED:
        return builtin_spec(ref)
    return load_spec(Path(ref))


@dataclass(frozen=True)
class AlgebraicNumber:
    """(c_0 + c_1 x + ... + c_{n-1} x^{n-1}) / nu, stored reduced."""

    spec: FieldSpec
    numerator: tuple[int, ...]
    denominator: int = 1

    def __post_init__(self):
        num = [int(c) for c in _pad(self.numerator, self.spec.degree)]
        den = int(self.denominator)
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num, den = [-c for c in num], -den
        g = math.gcd(den, *num)
        object.__setattr__(self, "numerator", tuple(c // g for c in num))
        object.__setattr__(self, "denominator", den // g)

    @classmethod
    def from_rationals(cls, spec: FieldSpec, coeffs: Sequence) -> AlgebraicNumber:
        fr = [Fraction(c) for c in _pad(coeffs, spec.degree)]
        den = math.lcm(*(f.denominator for f in fr)) if fr else 1
        return cls(spec, tuple(int(f * den) for f in fr), den)

    def rationals(self) -> list[Fraction]:
        return [Fraction(c, self.denominator) for c in self.numerator]

    def __mul__(self, other: AlgebraicNumber) -> AlgebraicNumber:
        prod = _mul_q(self.numerator, other.numerator, self.spec.coeffs)
        return AlgebraicNumber(self.spec, tuple(prod), self.denominator * other.denominator)

    def __neg__(self) -> AlgebraicNumber:
        return AlgebraicNumber(self.spec, tuple(-c for c in self.numerator), self.denominator)

    def __pow__(self, k: int) -> AlgebraicNumber:
        if k < 0:
            raise ValueError("negative powers are not supported")
        out = self.spec.element([1])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_zero(self) -> bool:
        return not any(self.numerator)

    def is_rational(self, value) -> bool:
        target = Fraction(value)
        return (
            all(c == 0 for c in self.numerator[1:])
            and Fraction(self.numerator[0], self.denominator) == target
        )

    def __str__(self) -> str:
        body = ",".join(str(c) for c in self.numerator)
        return body if self.denominator == 1 else f"{body}/{self.denominator}"


@dataclass(frozen=True)
class ResidueElement:
    spec: FieldSpec
    p: int
    coefficients: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "coefficients", tuple(int(c) % self.p for c in _pad(self.coefficients, self.spec.degree))
        )

    def _low(self):
        return reduction_data(self.spec.polynomial, self.p)

    def __mul__(self, other: ResidueElement) -> ResidueElement:
        return ResidueElement(self.spec, self.p, mulmod(self.coefficients, other.coefficients, self._low(), self.p))

    def __pow__(self, k: int) -> ResidueElement:
        return residue_pow(self, k)

    def is_one(self) -> bool:
        return self.coefficients[0] == 1 % self.p and not any(self.coefficients[1:])

    def is_zero(self) -> bool:
        return not any(self.coefficients)


@dataclass(frozen=True)
class SplittingData:
    p: int
    n_p: int
    g_p: int
    unramified: bool = True


def _check_unramified(spec: FieldSpec, p: int):
    if p in spec.bad_primes or not squarefree_mod_p(spec.polynomial, p):
        raise RamifiedPrime(f"p = {p} divides disc(P) for {spec.name}")


def splitting_data(spec: FieldSpec, p: int) -> SplittingData:
    """Residue degree n_p and number g_p of primes above p, by iterating Frobenius on x."""
    if not spec.galois:
        raise UnsupportedGroup(f"{spec.name} is not Galois; use the per-prime-ideal operations")
    _check_unramified(spec, p)
    n = spec.degree
    if n == 1:
        return SplittingData(p, 1, 1)
    low = reduction_data(spec.polynomial, p)
    x = (0, 1) + (0,) * (n - 2)
    y = x
    for f in range(1, n + 1):
        y = powmod_poly(y, p, low, p)
        if y == x:
            return SplittingData(p, f, n // f)
    raise RamifiedPrime(f"Frobenius did not return to x within {n} steps at p = {p}")


def frobenius_index(spec: FieldSpec, p: int) -> int | None:
    """Index of the conjugation map acting as x -> x^p modulo (P, p), if any."""
    _check_unramified(spec, p)
    n = spec.degree
    low = reduction_data(spec.polynomial, p)
    xp = powmod_poly((0, 1) + (0,) * (n - 2), p, low, p)
    for i, m in enumerate(spec.conjugation_maps):
        red = tuple(c.numerator * pow(c.denominator, -1, p) % p for c in m)
        if red == xp:
            return i
    return None


def reduce(eta: AlgebraicNumber, p: int) -> ResidueElement:
    if eta.denominator % p == 0 or p in eta.spec.bad_primes:
        raise BadPrime(f"cannot reduce {eta} modulo {p}")
    inv = pow(eta.denominator, -1, p)
    return ResidueElement(eta.spec, p, tuple(c * inv % p for c in eta.numerator))


def residue_pow(z: ResidueElement, k: int) -> ResidueElement:
    if k < 0:
        raise ValueError("exponent must be nonnegative")
    low = reduction_data(z.spec.polynomial, z.p)
    return ResidueElement(z.spec, z.p, powmod_poly(z.coefficients, k, low, z.p))


def conjugate(eta: AlgebraicNumber, i: int) -> AlgebraicNumber:
    spec = eta.spec
    if not spec.galois:
        raise UnsupportedGroup(f"{spec.name} has no conjugation maps")
    if not 0 <= i < spec.degree:
        raise IndexError(i)
    if i == 0:
        return eta
    mat, den = _map_matrix(spec, i)
    num = tuple(sum(r * c for r, c in zip(row, eta.numerator)) for row in mat)
    return AlgebraicNumber(spec, num, eta.denominator * den)


@lru_cache(maxsize=256)
def _map_matrix(spec: FieldSpec, i: int) -> tuple[tuple[tuple[int, ...], ...], int]:
    """Integer matrix A and denominator L with sigma_i(sum c_k x^k) = (A c) / L."""
    n = spec.degree
    cols = []
    power = [Fraction(1)] + [Fraction(0)] * (n - 1)
    for _ in range(n):
        cols.append(power)
        power = _mul_q(power, spec.conjugation_maps[i], spec.coeffs)
    den = math.lcm(*(c.denominator for col in cols for c in col))
    mat = tuple(tuple(int(cols[k][r] * den) for k in range(n)) for r in range(n))
    return mat, den


def norm(eta: AlgebraicNumber) -> Fraction:
    """Field norm as the determinant of multiplication by eta."""
    spec = eta.spec
    n = spec.degree
    cols = []
    basis = [1]
    for k in range(n):
        mono = [0] * k + [1]
        cols.append(_reduce_q(_mul_q(eta.rationals(), mono, spec.coeffs) + [0] * n, spec.coeffs))
    mat = [[Fraction(cols[j][i]) for j in range(n)] for i in range(n)]
    del basis
    return _det(mat)


def _det(mat: list[list[Fraction]]) -> Fraction:
    m = [row[:] for row in mat]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                for k in range(c, n):
                    m[r][k] -= f * m[c][k]
    return det


def cyclic_generator(spec: FieldSpec) -> int:
    """Index of the first conjugation map generating the whole group; UnsupportedGroup if none."""
    if not spec.galois:
        raise UnsupportedGroup(f"{spec.name} is not Galois")
    for i in range(spec.degree):
        if spec.map_order(i) == spec.degree:
            return i
    raise UnsupportedGroup(f"Galois group of {spec.name} is not cyclic")


# -- numerics ----------------------------------------------------------------

_DPS = 40


@lru_cache(maxsize=64)
def _roots(coeffs: tuple[int, ...]) -> tuple:
    with mpmath.workdps(_DPS):
        if len(coeffs) == 2:
            return (mpmath.mpc(-coeffs[0]),)
        roots = mpmath.polyroots(list(reversed(coeffs)), maxsteps=200, extraprec=200)
        return tuple(mpmath.mpc(r) for r in roots)


def embeddings(spec: FieldSpec) -> tuple:
    """Complex roots of P at 40 significant digits."""
    return _roots(spec.coeffs)


def _eval(coeffs: Sequence, r):
    acc = mpmath.mpc(0)
    for c in reversed(coeffs):
        acc = acc * r + mpmath.mpf(Fraction(c).numerator) / Fraction(c).denominator
    return acc


def numeric_conjugates(eta: AlgebraicNumber) -> list:
    with mpmath.workdps(_DPS):
        return [_eval(eta.rationals(), r) for r in embeddings(eta.spec)]


def house(eta: AlgebraicNumber) -> float:
    """Largest absolute value among the conjugates of eta."""
    with mpmath.workdps(_DPS):
        return float(max(abs(v) for v in numeric_conjugates(eta)))


@lru_cache(maxsize=64)
def root_permutation(spec: FieldSpec, i: int) -> tuple[int, ...]:
    """perm[j] = k where sigma_i(r_j) = r_k for the numerically computed roots."""
    roots = embeddings(spec)
    with mpmath.workdps(_DPS):
        perm = []
        for r in roots:
            image = _eval(spec.conjugation_maps[i], r)
            k = min(range(len(roots)), key=lambda t: abs(roots[t] - image))
            perm.append(k)
    if sorted(perm) != list(range(len(roots))):
        raise SpecInvalid(f"map {i} does not permute the numerical roots")
    return tuple(perm)


def group_ring_house(eta: AlgebraicNumber, exponents: Sequence[int], generator: int) -> float:
    """House of eta^(sum a_k s^k) where s is conjugation map ``generator``."""
    spec = eta.spec
    roots = embeddings(spec)
    perm = root_permutation(spec, generator)
    with mpmath.workdps(_DPS):
        vals = [abs(_eval(eta.rationals(), r)) for r in roots]
        best = None
        for j in range(len(roots)):
            total = mpmath.mpf(0)
            idx = j
            for a in exponents:
                if a:
                    total += a * mpmath.log(vals[idx])
                idx = perm[idx]
            best = total if best is None or total > best else best
        return float(mpmath.exp(best))


# -- rank condition --------------------------------------------------------------


def _roots_of_unity_exponent(n: int) -> int:
    """lcm of all m with phi(m) dividing n: every root of unity in a degree-n field has order dividing it."""
    from .intarith import euler_phi

    out = 1
    for m in range(1, 4 * n * n + 7):
        if n % euler_phi(m) == 0:
            out = math.lcm(out, m)
    return out


def is_root_of_unity(x: AlgebraicNumber) -> bool:
    if x.is_rational(1) or x.is_rational(-1):
        return True
    if x.is_zero():
        return False
    if all(abs(r.imag) < 1e-20 for r in embeddings(x.spec)):
        return False
    if any(abs(abs(v) - 1) > 1e-12 for v in numeric_conjugates(x)):
        return False
    return (x ** _roots_of_unity_exponent(x.spec.degree)).is_rational(1)


def _conj_power(eta: AlgebraicNumber, gen: int, k: int) -> AlgebraicNumber:
    idx = 0
    for _ in range(k):
        idx = eta.spec.compose_index(gen, idx)
    return conjugate(eta, idx)


def _not_torsion_ratio(num: list[AlgebraicNumber], den: list[AlgebraicNumber]) -> bool:
    """True iff prod(num)/prod(den) is not a root of unity; the quotient is never formed for +-1."""
    a = num[0]
    for x in num[1:]:
        a = a * x
    b = den[0] if den else a.spec.element([1])
    for x in den[1:]:
        b = b * x
    if a == b or a == -b:
        return False
    if all(abs(r.imag) < 1e-20 for r in embeddings(a.spec)):
        return True
    va, vb = numeric_conjugates(a), numeric_conjugates(b)
    if any(abs(abs(x) - abs(y)) > 1e-12 * max(1, abs(y)) for x, y in zip(va, vb)):
        return True
    L = _roots_of_unity_exponent(a.spec.degree)
    return (a**L) != (b**L)


def rank_check(eta: AlgebraicNumber) -> bool:
    """Full-rank test for the Galois module generated by eta (cyclic groups of order 2, 3, 4).

    Each rational idempotent component of eta must be a non-torsion element.
    """
    spec = eta.spec
    if spec.degree not in (2, 3, 4):
        raise UnsupportedGroup(f"rank_check supports degrees 2, 3, 4; {spec.name} has degree {spec.degree}")
    s = cyclic_generator(spec)
    if eta.is_zero():
        return False
    c = [_conj_power(eta, s, k) for k in range(spec.degree)]
    if spec.degree == 2:
        checks = [(c, []), ([c[0]], [c[1]])]
    elif spec.degree == 3:
        checks = [(c, []), ([c[0], c[0]], [c[1], c[2]])]
    else:
        checks = [(c, []), ([c[0]], [c[2]]), ([c[0], c[2]], [c[1], c[3]])]
    return all(_not_torsion_ratio(num, den) for num, den in checks)
