"""Independent oracles for the test suite.

These deliberately avoid the library's own mechanisms: the p-adic fractional
part is recomputed digit by digit (no modular inverse), ball integrals come
from exact Riemann sums over coset progressions, and real-line inner products
from adaptive quadrature with explicit discontinuity breakpoints.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import Tuple

import numpy as np
from scipy.integrate import quad

from adelic_gabor import PAdicBall, Phase
from adelic_gabor.exact import PADIC_INFINITY, padic_valuation


def frac_part_digits(x, p: int) -> Fraction:
    """{x}_p by digit iteration: strip one p-adic digit at a time from the
    negative positions, trying all p candidates (no modular inverses)."""
    x = Fraction(x)
    v = padic_valuation(x, p)
    if v is PADIC_INFINITY or v >= 0:
        return Fraction(0)
    result = Fraction(0)
    y = x
    for i in range(v, 0):
        pi = Fraction(p) ** i
        for d in range(p):
            rem = y - d * pi
            w = padic_valuation(rem, p)
            if w is PADIC_INFINITY or w > i:
                result += d * pi
                y = rem
                break
        else:  # pragma: no cover - digits always exist
            raise AssertionError("no digit found")
    return result % 1


def char_integral_oracle(r, ball: PAdicBall) -> Tuple[Fraction, Fraction]:
    """Exact Riemann sum of exp(2 pi i {r t}_p) over the ball.

    Returns (magnitude_coeff, turns): the integral equals
    magnitude_coeff * exp(2 pi i turns), with magnitude_coeff = 0 for the
    vanishing case.  Enumerates the cosets on which the character is constant
    and verifies uniform residue coverage with exact integer arithmetic.
    """
    r = Fraction(r)
    p = ball.p
    v = padic_valuation(r, p)
    if v is PADIC_INFINITY:
        return ball.measure, Fraction(0)
    m = max(ball.level, -v)  # character is constant on level-m cosets
    n_cosets = p ** (m - ball.level)
    t0 = frac_part_digits(r * ball.center, p)
    step = frac_part_digits(r * Fraction(p) ** ball.level, p)
    if n_cosets == 1:
        return ball.measure, t0 % 1
    denom = max(t0.denominator, step.denominator)  # both are powers of p
    base = int(t0 * denom) % denom
    inc = int(step * denom) % denom
    # residues of the progression base + u*inc mod denom, u = 0..n_cosets-1
    residues = (base + np.arange(n_cosets, dtype=np.int64) * inc) % denom
    counts = np.bincount(residues, minlength=denom)
    hit = counts[counts > 0]
    # the progression covers a coset of the subgroup generated by inc uniformly;
    # summing a nontrivial character over it gives exactly zero
    assert hit.size > 1 and np.all(hit == hit[0]), "nonuniform residue coverage"
    order = hit.size
    if order <= 4096:  # numeric cross-check of the exact coset-sum argument
        sub_sum = sum(cmath.exp(2j * math.pi * j / denom) for j in np.flatnonzero(counts))
        assert abs(sub_sum) < 1e-9 * order
    return Fraction(0), Fraction(0)


def quad_inner(f, g, a: float, b: float, breakpoints=(), tol: float = 1e-12) -> complex:
    """<f, E_b T_a g> on a finite interval by quadrature with breakpoints."""
    lo, hi = -30.0, 30.0
    pts = sorted(x for x in breakpoints if lo < x < hi)

    def component(real: bool):
        def integrand(t):
            val = f(t) * np.conj(g(t - a) * cmath.exp(2j * math.pi * b * t))
            return val.real if real else val.imag

        val, err = quad(integrand, lo, hi, points=pts or None, epsabs=tol, epsrel=0, limit=500)
        assert err < 100 * tol
        return val

    return complex(component(True), component(False))


def phase_complex(phase: Phase) -> complex:
    return cmath.exp(2j * math.pi * float(phase.turns) + 1j * phase.radians)
