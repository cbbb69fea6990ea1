"""Exact scalar types: N-ary fractions, residues, and small prime helpers.

Everything in this module is integer or rational exact; no floats are
created anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "NaryFraction",
    "Residue",
    "nary_parse",
    "common_denominator",
    "smallest_prime_not_dividing",
    "mod_reduce",
    "is_prime",
    "next_prime",
    "primes_up_to",
    "distinct_prime_factors",
    "parse_rational",
    "format_rational",
]


@dataclass(frozen=True, eq=False)
class NaryFraction:
    """A rational of the form z / base**t.

    Stored canonically: t = 0 or base does not divide z.  Equality and
    hashing are by value, so the same rational written over different
    bases compares equal.
    """

    base: int
    z: int
    t: int = 0

    def __post_init__(self) -> None:
        if self.base < 2:
            raise ValueError(f"base must be >= 2, got {self.base}")
        if self.t < 0:
            raise ValueError(f"exponent must be >= 0, got {self.t}")
        z, t = self.z, self.t
        while t > 0 and z % self.base == 0:
            z //= self.base
            t -= 1
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "t", t)

    def as_fraction(self) -> Fraction:
        return Fraction(self.z, self.base**self.t)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, NaryFraction):
            return self.as_fraction() == other.as_fraction()
        if isinstance(other, (int, Fraction)):
            return self.as_fraction() == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.as_fraction())

    def __str__(self) -> str:
        if self.t == 0:
            return str(self.z)
        return f"{self.z}/{self.base ** self.t}"


@dataclass(frozen=True)
class Residue:
    """An element of Z/mZ, stored as the canonical representative in [0, m)."""

    modulus: int
    value: int

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise ValueError(f"modulus must be >= 1, got {self.modulus}")
        if not 0 <= self.value < self.modulus:
            raise ValueError(f"value {self.value} not reduced mod {self.modulus}")

    def __add__(self, other: "Residue") -> "Residue":
        if not isinstance(other, Residue):
            return NotImplemented
        if other.modulus != self.modulus:
            raise ValueError("cannot add residues with different moduli")
        return Residue(self.modulus, (self.value + other.value) % self.modulus)

    def __int__(self) -> int:
        return self.value

    @property
    def is_zero(self) -> bool:
        return self.value == 0


def mod_reduce(z: int, m: int) -> Residue:
    """Reduce the integer z modulo m >= 1."""
    if m < 1:
        raise ValueError(f"modulus must be >= 1, got {m}")
    return Residue(m, z % m)


def _nary_from_fraction(q: Fraction, base: int) -> NaryFraction:
    b = q.denominator
    # q is representable iff every prime factor of its denominator divides base
    rem = b
    while True:
        g = math.gcd(rem, base)
        if g == 1:
            break
        while rem % g == 0:
            rem //= g
    if rem != 1:
        raise ValueError(f"{q} is not of the form z/{base}^t")
    t = 0
    power = 1
    while power % b != 0:
        power *= base
        t += 1
    return NaryFraction(base, q.numerator * (power // b), t)


def nary_parse(text: str, base: int) -> NaryFraction:
    """Parse an N-ary fraction.

    Accepted forms: a decimal integer "z", a decimal fraction "a/b" whose
    value is expressible as z/base**t, or a base-N positional literal with
    a fractional part such as "10.01" (digits are read in the given base).
    """
    if base < 2:
        raise ValueError(f"base must be >= 2, got {base}")
    s = text.strip()
    if not s:
        raise ValueError("empty numeral")
    if "/" in s:
        num, _, den = s.partition("/")
        d = int(den)
        if d <= 0:
            raise ValueError(f"denominator must be positive in {text!r}")
        return _nary_from_fraction(Fraction(int(num), d), base)
    if "." in s:
        sign = -1 if s.startswith("-") else 1
        body = s.lstrip("+-")
        whole, _, frac = body.partition(".")
        if not frac:
            raise ValueError(f"missing fractional digits in {text!r}")
        z = int(whole or "0", base) * base ** len(frac) + int(frac, base)
        return NaryFraction(base, sign * z, len(frac))
    return NaryFraction(base, int(s), 0)


def common_denominator(weights) -> int:
    """Least M >= 1 such that M*w is an integer for every weight w."""
    weights = list(weights)
    if not weights:
        raise ValueError("need at least one weight")
    dens = []
    for w in weights:
        if isinstance(w, NaryFraction):
            w = w.as_fraction()
        dens.append(Fraction(w).denominator)
    return math.lcm(*dens)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than n."""
    p = n + 1
    while not is_prime(p):
        p += 1
    return p


def smallest_prime_not_dividing(n: int) -> int:
    """Smallest prime p with p not dividing n (n >= 1)."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    p = 2
    while n % p == 0:
        p = next_prime(p)
    return p


def primes_up_to(limit: int) -> list[int]:
    """All primes <= limit, by sieve."""
    if limit < 2:
        return []
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i, flag in enumerate(sieve) if flag]


def distinct_prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n >= 1, ascending."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    out = []
    m = n
    f = 2
    while f * f <= m:
        if m % f == 0:
            out.append(f)
            while m % f == 0:
                m //= f
        f += 1 if f == 2 else 2
    if m > 1:
        out.append(m)
    return out


def parse_rational(text: str) -> Fraction:
    """Parse a rational from a decimal string like "5", "-7/100"."""
    return Fraction(text.strip())


def format_rational(q: Fraction | int) -> str:
    """Serialize a rational as a decimal string, e.g. Fraction(-7, 100) -> "-7/100"."""
    return str(Fraction(q))
