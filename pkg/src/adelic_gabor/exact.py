"""Exact rational and p-adic arithmetic.

Everything in this module is pure and exact: valuations, p-adic absolute
values and fractional parts, the product-formula defect, CRT-style coset
solving, and characters of the p-adic integers indexed by roots of unity
of p-power order.  Rationals are carried by :class:`fractions.Fraction`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union

from sympy import isprime

__all__ = [
    "PADIC_INFINITY",
    "PAdicValuation",
    "Phase",
    "PrueferElement",
    "check_prime",
    "crt_congruence_solve",
    "padic_abs",
    "padic_fractional_part",
    "padic_valuation",
    "product_formula_defect",
    "pruefer_char_eval",
]

#: Valuation of zero.
PADIC_INFINITY = math.inf

PAdicValuation = Union[int, float]

RationalLike = Union[int, Fraction]


def check_prime(p: int) -> int:
    """Validate that ``p`` is a prime number, returning it."""
    if not isinstance(p, int) or not isprime(p):
        raise ValueError(f"not a prime: {p!r}")
    return p


def padic_valuation(x: RationalLike, p: int) -> PAdicValuation:
    """p-adic valuation of a rational: the exponent of p in x.

    Returns ``PADIC_INFINITY`` for ``x == 0``.
    """
    check_prime(p)
    x = Fraction(x)
    if x == 0:
        return PADIC_INFINITY
    v = 0
    num = x.numerator
    while num % p == 0:
        num //= p
        v += 1
    den = x.denominator
    while den % p == 0:
        den //= p
        v -= 1
    return v


def padic_abs(x: RationalLike, p: int) -> Fraction:
    """p-adic absolute value |x|_p = p**(-v_p(x)), exactly; |0|_p = 0."""
    v = padic_valuation(x, p)
    if v is PADIC_INFINITY:
        return Fraction(0)
    return Fraction(1, p**v) if v >= 0 else Fraction(p ** (-v))


def padic_fractional_part(x: RationalLike, p: int) -> Fraction:
    """The unique r in [0,1) with p-power denominator and x - r in Z_p.

    Computed in closed form: write x = a / (m * p**k) with gcd(a, m*p**k)=1
    and p not dividing m; then r = (a * m^{-1} mod p**k) / p**k.
    """
    check_prime(p)
    x = Fraction(x)
    den = x.denominator
    k = 0
    while den % p == 0:
        den //= p
        k += 1
    if k == 0:
        return Fraction(0)
    pk = p**k
    m_inv = pow(den, -1, pk)
    return Fraction((x.numerator * m_inv) % pk, pk)


def product_formula_defect(x: RationalLike) -> int:
    """x minus the sum of its p-adic fractional parts over p | denominator.

    The result is always an integer (the exact content of the adelic
    product formula); a non-integer result would indicate a bug.
    """
    x = Fraction(x)
    total = x
    den = x.denominator
    d = 2
    while d * d <= den:
        if den % d == 0:
            total -= padic_fractional_part(x, d)
            while den % d == 0:
                den //= d
        d += 1
    if den > 1:
        total -= padic_fractional_part(x, den)
    if total.denominator != 1:
        raise AssertionError(f"product formula defect not integral: {total}")
    return int(total)


def crt_congruence_solve(targets: Mapping[int, RationalLike]) -> Fraction:
    """The unique q in [0,1) with q - x_p in Z_p for each prime in ``targets``
    and q in Z_p for every other prime.

    Equivalently q = sum_p {x_p}_p reduced mod 1.
    """
    q = Fraction(0)
    for p, x in targets.items():
        q += padic_fractional_part(x, p)
    return q % 1


@dataclass(frozen=True)
class Phase:
    """A unimodular complex number exp(2*pi*i*turns) * exp(i*radians).

    The rational ``turns`` part is exact (mod 1); ``radians`` carries any
    inexact real-line contribution and is 0 for purely p-adic characters.
    """

    turns: Fraction = Fraction(0)
    radians: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "turns", Fraction(self.turns) % 1)

    def __mul__(self, other: "Phase") -> "Phase":
        return Phase(self.turns + other.turns, self.radians + other.radians)

    def conjugate(self) -> "Phase":
        return Phase(-self.turns, -self.radians)

    @property
    def is_exact(self) -> bool:
        return self.radians == 0.0

    def to_complex(self) -> complex:
        return complex(
            math.cos(2 * math.pi * self.turns + self.radians),
            math.sin(2 * math.pi * self.turns + self.radians),
        )

    def is_one(self) -> bool:
        return self.turns == 0 and self.radians == 0.0

    def as_dict(self) -> dict:
        return {
            "turns": f"{self.turns.numerator}/{self.turns.denominator}",
            "radians": self.radians,
        }


ONE_PHASE = Phase()


@dataclass(frozen=True)
class PrueferElement:
    """A p-power root of unity exp(2*pi*i*k/p**n), i.e. the rational k/p**n mod 1.

    Invariant: 0 <= k < p**n, and either k = n = 0 or p does not divide k.
    """

    p: int
    k: int
    n: int

    def __post_init__(self) -> None:
        check_prime(self.p)
        if not (0 <= self.k < self.p**self.n):
            raise ValueError("numerator out of range")
        if self.k == 0:
            if self.n != 0:
                raise ValueError("zero element must have n = 0")
        elif self.k % self.p == 0:
            raise ValueError("numerator must be coprime to p")

    @classmethod
    def from_rational(cls, x: RationalLike, p: int) -> "PrueferElement":
        """Reduce a rational with p-power denominator mod 1."""
        r = padic_fractional_part(Fraction(x) % 1, p)
        if Fraction(x) % 1 != r:
            raise ValueError(f"{x} is not a p-power-denominator rational mod 1")
        n = 0
        d = r.denominator
        while d > 1:
            d //= p
            n += 1
        return cls(p, r.numerator, n)

    def as_rational(self) -> Fraction:
        return Fraction(self.k, self.p**self.n)


def pruefer_char_eval(z: PrueferElement, x: RationalLike) -> Phase:
    """Evaluate the character of Z_p indexed by ``z`` at the p-adic integer
    ``x``: exp(2*pi*i*{x*z}_p).
    """
    x = Fraction(x)
    v = padic_valuation(x, z.p)
    if v is not PADIC_INFINITY and v < 0:
        raise ValueError(f"{x} is not in Z_{z.p}")
    return Phase(padic_fractional_part(x * z.as_rational(), z.p))
