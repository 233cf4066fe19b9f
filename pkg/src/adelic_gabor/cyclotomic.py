"""Exact complex scalars as rational combinations of roots of unity.

An :class:`ExactComplex` is a finite sum  sum_j c_j * exp(2*pi*i*t_j)  with
rational coefficients c_j and rational turns t_j.  Values are kept in the
canonical basis of the cyclotomic field Q(zeta_N), N = lcm of the turn
denominators, by reducing the coefficient polynomial modulo the N-th
cyclotomic polynomial.  This makes equality (and in particular "exactly
zero") decidable, which the p-adic layer relies on throughout.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Tuple, Union

from sympy import cyclotomic_poly

from .exact import Phase

__all__ = ["ExactComplex", "EXACT_ZERO", "EXACT_ONE"]

_MAX_ORDER = 200_000


@lru_cache(maxsize=None)
def _cyclotomic_coeffs(n: int) -> Tuple[int, ...]:
    """Integer coefficients of the n-th cyclotomic polynomial, low degree first."""
    poly = cyclotomic_poly(n)
    coeffs = poly.as_poly().all_coeffs()  # highest degree first
    return tuple(int(c) for c in reversed(coeffs))


def _lcm(a: int, b: int) -> int:
    import math

    return a * b // math.gcd(a, b)


class ExactComplex:
    """Immutable exact element of a cyclotomic field, stored as turn -> coeff."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Union[Dict[Fraction, Fraction], None] = None):
        merged: Dict[Fraction, Fraction] = {}
        for turn, coeff in (terms or {}).items():
            turn = Fraction(turn) % 1
            coeff = Fraction(coeff)
            if coeff:
                merged[turn] = merged.get(turn, Fraction(0)) + coeff
        self._terms = _canonicalize({t: c for t, c in merged.items() if c})

    # ---- constructors -------------------------------------------------

    @classmethod
    def from_rational(cls, x) -> "ExactComplex":
        return cls({Fraction(0): Fraction(x)})

    @classmethod
    def from_phase(cls, phase: Phase, magnitude=1) -> "ExactComplex":
        if not phase.is_exact:
            raise ValueError("phase with inexact radians part is not exact")
        return cls({phase.turns: Fraction(magnitude)})

    # ---- queries -------------------------------------------------------

    @property
    def terms(self) -> Dict[Fraction, Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return not self._terms or set(self._terms) == {Fraction(0)}

    def rational_value(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        if not self.is_rational():
            raise ValueError("not a rational value")
        return self._terms[Fraction(0)]

    def to_complex(self) -> complex:
        return sum(
            (float(c) * cmath.exp(2j * cmath.pi * float(t)) for t, c in self._terms.items()),
            complex(0),
        )

    def __abs__(self) -> float:
        return abs(self.to_complex())

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = ExactComplex.from_rational(other)
        if not isinstance(other, ExactComplex):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        if self.is_zero():
            return "ExactComplex(0)"
        parts = " + ".join(f"{c}*e(2πi·{t})" for t, c in sorted(self._terms.items()))
        return f"ExactComplex({parts})"

    # ---- arithmetic ----------------------------------------------------

    def __add__(self, other: "ExactComplex") -> "ExactComplex":
        if isinstance(other, (int, Fraction)):
            other = ExactComplex.from_rational(other)
        out = dict(self._terms)
        for t, c in other._terms.items():
            out[t] = out.get(t, Fraction(0)) + c
        return ExactComplex(out)

    __radd__ = __add__

    def __neg__(self) -> "ExactComplex":
        return ExactComplex({t: -c for t, c in self._terms.items()})

    def __sub__(self, other: "ExactComplex") -> "ExactComplex":
        return self + (-other)

    def __mul__(self, other) -> "ExactComplex":
        if isinstance(other, (int, Fraction)):
            return ExactComplex({t: c * Fraction(other) for t, c in self._terms.items()})
        if isinstance(other, Phase):
            return self * ExactComplex.from_phase(other)
        out: Dict[Fraction, Fraction] = {}
        for t1, c1 in self._terms.items():
            for t2, c2 in other._terms.items():
                t = (t1 + t2) % 1
                out[t] = out.get(t, Fraction(0)) + c1 * c2
        return ExactComplex(out)

    __rmul__ = __mul__

    def conjugate(self) -> "ExactComplex":
        return ExactComplex({(-t) % 1: c for t, c in self._terms.items()})


def _canonicalize(terms: Dict[Fraction, Fraction]) -> Dict[Fraction, Fraction]:
    """Reduce modulo the cyclotomic polynomial until the basis is stable."""
    while True:
        if not terms:
            return {}
        n = 1
        for t in terms:
            n = _lcm(n, t.denominator)
        if n == 1:
            return terms
        if n % 4 == 2:
            # Q(zeta_n) = Q(zeta_{n/2}) for n = 2 mod 4; rewriting with the odd
            # order keeps the canonical form unique across equal subfields
            half = n // 2
            rewritten: Dict[Fraction, Fraction] = {}
            for t, c in terms.items():
                j = int(t * n) % n
                if j % 2:
                    j, c = (j + half) % n, -c  # zeta_n^j = -zeta_n^{j + n/2}
                key = Fraction(j // 2, half)
                rewritten[key] = rewritten.get(key, Fraction(0)) + c
            terms = {t: c for t, c in rewritten.items() if c}
            continue
        if n > _MAX_ORDER:
            raise ValueError(f"cyclotomic order too large for exact reduction: {n}")
        coeffs = [Fraction(0)] * n
        for t, c in terms.items():
            coeffs[int(t * n)] += c
        phi = _cyclotomic_coeffs(n)
        deg = len(phi) - 1
        # phi is monic: synthetic division, highest power first.
        for j in range(n - 1, deg - 1, -1):
            lead = coeffs[j]
            if lead:
                coeffs[j] = Fraction(0)
                for i in range(deg):
                    coeffs[j - deg + i] -= lead * phi[i]
        new_terms: Dict[Fraction, Fraction] = {}
        for j, c in enumerate(coeffs):
            if c:
                new_terms[Fraction(j, n)] = c
        new_n = 1
        for t in new_terms:
            new_n = _lcm(new_n, t.denominator)
        if new_n == n:
            return new_terms
        terms = new_terms


EXACT_ZERO = ExactComplex()
EXACT_ONE = ExactComplex.from_rational(1)
