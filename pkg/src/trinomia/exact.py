"""Exact arithmetic: binomials, Pochhammer symbols, truncated power series
with rational coefficients, and integer factorization.

Rationals are :class:`fractions.Fraction`, which is already normalized
(positive denominator, coprime terms) after every operation.

A :class:`TruncatedSeries` of order ``K`` knows the coefficients of
``var**0 .. var**K`` and nothing beyond; binary operations return the
smallest order both operands can vouch for.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

__all__ = [
    "TruncatedSeries",
    "Factorization",
    "binom",
    "coeff_c",
    "pochhammer",
    "series_mul",
    "series_reciprocal",
    "series_differentiate",
    "series_integrate",
    "series_substitute_monomial",
    "apply_theta",
    "factorize",
    "is_probable_prime",
]

VARIABLES = ("t", "z")


def binom(m: int, k: int) -> int:
    """Binomial coefficient m over k; zero when k > m."""
    if k < 0 or m < 0:
        raise ValueError("binom needs nonnegative arguments")
    if k > m:
        return 0
    return math.comb(m, k)


def coeff_c(n: int, j: int, k: int) -> int:
    """``C(n*k + j, k)``, the k-th coefficient of the generating function H_{n,j}."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    return math.factorial(n * k + j) // (math.factorial((n - 1) * k + j) * math.factorial(k))


def pochhammer(a, k: int) -> Fraction:
    """Rising factorial ``a (a+1) ... (a+k-1)``, exact."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    a = Fraction(a)
    out = Fraction(1)
    for i in range(k):
        out *= a + i
    return out


# ---------------------------------------------------------------------------
# truncated series
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TruncatedSeries:
    """Power series ``sum coeffs[k] * var**k + O(var**(order+1))``."""

    variable: str
    coeffs: tuple

    def __post_init__(self):
        if self.variable not in VARIABLES:
            raise ValueError(f"unknown variable tag {self.variable!r}")
        if not self.coeffs:
            raise ValueError("a series needs at least one known coefficient")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @classmethod
    def from_coeffs(cls, coeffs: Iterable, variable: str = "t", order: int | None = None):
        coeffs = list(coeffs)
        if order is not None:
            if order + 1 < len(coeffs):
                coeffs = coeffs[: order + 1]
            else:
                coeffs += [0] * (order + 1 - len(coeffs))
        return cls(variable, tuple(coeffs))

    @classmethod
    def constant(cls, c, order: int, variable: str = "t"):
        return cls.from_coeffs([c], variable, order)

    @classmethod
    def monomial(cls, power: int, order: int, variable: str = "t", c=1):
        coeffs = [0] * (order + 1)
        if power <= order:
            coeffs[power] = c
        return cls(variable, tuple(coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> Fraction:
        if k < 0 or k > self.order:
            raise IndexError(f"coefficient {k} is beyond truncation order {self.order}")
        return self.coeffs[k]

    def __len__(self):
        return len(self.coeffs)

    def truncate(self, order: int) -> TruncatedSeries:
        if order > self.order:
            raise ValueError(f"cannot extend order {self.order} to {order}")
        return TruncatedSeries(self.variable, self.coeffs[: order + 1])

    def shift(self, m: int) -> TruncatedSeries:
        """Multiply by ``var**m``; the order grows by ``m``."""
        return TruncatedSeries(self.variable, (Fraction(0),) * m + self.coeffs)

    def first_nonzero(self) -> int | None:
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return None

    def is_zero(self) -> bool:
        return self.first_nonzero() is None

    def with_coefficient(self, k: int, value) -> TruncatedSeries:
        coeffs = list(self.coeffs)
        coeffs[k] = Fraction(value)
        return TruncatedSeries(self.variable, tuple(coeffs))

    def _check(self, other: TruncatedSeries):
        if self.variable != other.variable:
            raise ValueError(f"variable mismatch: {self.variable!r} vs {other.variable!r}")

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self + TruncatedSeries.constant(other, self.order, self.variable)
        self._check(other)
        K = min(self.order, other.order)
        return TruncatedSeries(self.variable, tuple(a + b for a, b in zip(self.coeffs[: K + 1], other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.variable, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return series_mul(self, other)
        c = Fraction(other)
        return TruncatedSeries(self.variable, tuple(c * a for a in self.coeffs))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        result = TruncatedSeries.constant(1, self.order, self.variable)
        base = self
        while e:
            if e & 1:
                result = series_mul(result, base)
            e >>= 1
            if e:
                base = series_mul(base, base)
        return result

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}*{self.variable}^{k}" if k else str(c))
        body = " + ".join(terms) or "0"
        return f"TruncatedSeries({body} + O({self.variable}^{self.order + 1}))"


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated at ``min(a.order, b.order)``."""
    a._check(b)
    K = min(a.order, b.order)
    ac, bc = a.coeffs, b.coeffs
    # x and y series are sparse in t, so skip zero coefficients
    a_nz = [(i, c) for i, c in enumerate(ac[: K + 1]) if c]
    out = [Fraction(0)] * (K + 1)
    for i, ci in a_nz:
        for j in range(K + 1 - i):
            cj = bc[j]
            if cj:
                out[i + j] += ci * cj
    return TruncatedSeries(a.variable, tuple(out))


def series_reciprocal(a: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse through ``a.order``."""
    a0 = a.coeffs[0]
    if a0 == 0:
        raise ZeroDivisionError("series with zero constant term has no reciprocal")
    inv0 = 1 / a0
    b = [inv0]
    for k in range(1, a.order + 1):
        s = sum(a.coeffs[i] * b[k - i] for i in range(1, k + 1) if a.coeffs[i])
        b.append(-s * inv0)
    return TruncatedSeries(a.variable, tuple(b))


def series_differentiate(a: TruncatedSeries) -> TruncatedSeries:
    if a.order == 0:
        # order -1 is not representable; report the zero constant
        return TruncatedSeries(a.variable, (Fraction(0),))
    return TruncatedSeries(a.variable, tuple(k * a.coeffs[k] for k in range(1, a.order + 1)))


def series_integrate(a: TruncatedSeries) -> TruncatedSeries:
    """Antiderivative vanishing at 0; order goes up by one."""
    return TruncatedSeries(a.variable, (Fraction(0),) + tuple(c / (k + 1) for k, c in enumerate(a.coeffs)))


def series_substitute_monomial(a: TruncatedSeries, m: int, prefactor_exponent: int = 0) -> TruncatedSeries:
    """Substitute ``z = t**m`` into ``a(z)`` and multiply by ``t**prefactor_exponent``."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if prefactor_exponent < 0:
        raise ValueError("prefactor exponent must be nonnegative")
    out = [Fraction(0)] * (m * a.order + prefactor_exponent + 1)
    for k, c in enumerate(a.coeffs):
        out[m * k + prefactor_exponent] = c
    return TruncatedSeries("t", tuple(out))


def apply_theta(a: TruncatedSeries) -> TruncatedSeries:
    """Euler operator ``var * d/dvar``: scales the k-th coefficient by k."""
    return TruncatedSeries(a.variable, tuple(k * c for k, c in enumerate(a.coeffs)))


# ---------------------------------------------------------------------------
# factorization
# ---------------------------------------------------------------------------

TRIAL_LIMIT = 10**6
_MR_ROUNDS = 64


@lru_cache(maxsize=1)
def _small_primes() -> tuple:
    sieve = bytearray([1]) * (TRIAL_LIMIT + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(TRIAL_LIMIT) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, TRIAL_LIMIT + 1, p)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


def is_probable_prime(v: int, rounds: int = _MR_ROUNDS, rng: random.Random | None = None) -> bool:
    """Miller-Rabin with ``rounds`` random bases (plus a few fixed small ones)."""
    if v < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if v % p == 0:
            return v == p
    d, s = v - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    rng = rng or random.Random(v)
    bases = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]
    bases += [rng.randrange(2, v - 1) for _ in range(rounds)] if v > 4 else []
    for a in bases:
        a %= v
        if a in (0, 1, v - 1):
            continue
        x = pow(a, d, v)
        if x in (1, v - 1):
            continue
        for _ in range(s - 1):
            x = x * x % v
            if x == v - 1:
                break
        else:
            return False
    return True


def _pollard_brent(v: int, rng: random.Random) -> int:
    """Return a nontrivial factor of the composite ``v``."""
    if v % 2 == 0:
        return 2
    while True:
        y, c, m = rng.randrange(1, v), rng.randrange(1, v), 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % v
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % v
                    q = q * abs(x - y) % v
                g = math.gcd(q, v)
                k += m
            r *= 2
        if g == v:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % v
                g = math.gcd(abs(x - ys), v)
        if g != v:
            return g


@dataclass(frozen=True)
class Factorization:
    value: int
    factors: tuple  # ((prime, exponent), ...) sorted by prime

    def product(self) -> int:
        return math.prod(p**e for p, e in self.factors)

    def __str__(self):
        if not self.factors:
            return "1"
        return "·".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors)


def factorize(v: int) -> Factorization:
    """Complete prime factorization of ``v >= 1``.

    Trial division by primes below ``TRIAL_LIMIT``, then Pollard-Brent rho
    on what is left, each factor certified by Miller-Rabin.
    """
    if v < 1:
        raise ValueError("factorize needs a positive integer")
    counts: dict[int, int] = {}
    rest = v
    for p in _small_primes():
        if p * p > rest:
            break
        while rest % p == 0:
            counts[p] = counts.get(p, 0) + 1
            rest //= p
    if rest > 1:
        rng = random.Random(rest)
        stack = [rest]
        while stack:
            m = stack.pop()
            if m <= TRIAL_LIMIT or is_probable_prime(m):
                # anything left below the trial limit has no small factor, so it is prime
                counts[m] = counts.get(m, 0) + 1
                continue
            d = _pollard_brent(m, rng)
            stack.extend((d, m // d))
    return Factorization(v, tuple(sorted(counts.items())))


def format_factored(v: int) -> str:
    """Signed factored form, e.g. ``-2^3·3·7·13``."""
    if v == 0:
        return "0"
    sign = "-" if v < 0 else ""
    return sign + str(factorize(abs(v)))


def parse_factored(text: str) -> int:
    """Inverse of :func:`format_factored`."""
    text = text.strip()
    sign = -1 if text.startswith("-") else 1
    total = 1
    for part in text.lstrip("-").split("·"):
        p, _, e = part.partition("^")
        total *= int(p) ** int(e or 1)
    return sign * total

