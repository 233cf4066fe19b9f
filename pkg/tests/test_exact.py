"""Exact arithmetic layer: valuations, fractional parts, phases, cyclotomics."""

import math
import random
from fractions import Fraction as F

import pytest

from adelic_gabor import (
    ExactComplex,
    Phase,
    PrueferElement,
    crt_congruence_solve,
    padic_abs,
    padic_fractional_part,
    padic_valuation,
    product_formula_defect,
    pruefer_char_eval,
)
from adelic_gabor.exact import PADIC_INFINITY

from oracles import frac_part_digits, phase_complex


def test_valuation_basics():
    assert padic_valuation(F(12), 2) == 2
    assert padic_valuation(F(12), 3) == 1
    assert padic_valuation(F(1, 8), 2) == -3
    assert padic_valuation(F(0), 7) is PADIC_INFINITY
    assert padic_abs(F(1, 8), 2) == 8
    assert padic_abs(F(18), 3) == F(1, 9)
    assert padic_abs(0, 5) == 0


def test_valuation_ultrametric():
    rng = random.Random(7)
    for _ in range(200):
        p = rng.choice([2, 3, 5, 7])
        x = F(rng.randint(-500, 500), rng.randint(1, 500))
        y = F(rng.randint(-500, 500), rng.randint(1, 500))
        vx, vy = padic_valuation(x, p), padic_valuation(y, p)
        vsum = padic_valuation(x + y, p)
        assert vsum >= min(vx, vy)
        if vx != vy:
            assert vsum == min(vx, vy)
        if x and y:
            assert padic_valuation(x * y, p) == vx + vy


def test_fractional_part_against_digit_oracle():
    rng = random.Random(1)
    for _ in range(300):
        p = rng.choice([2, 3, 5])
        x = F(rng.randint(-p**6, p**6), p ** rng.randint(0, 5) * rng.choice([1, 7, 11]))
        frac = padic_fractional_part(x, p)
        assert frac == frac_part_digits(x, p)
        # defining property: frac in [0,1) with p-power denominator, x - frac in Z_p
        assert 0 <= frac < 1
        v = padic_valuation(x - frac, p)
        assert v is PADIC_INFINITY or v >= 0


def test_fractional_part_exhaustive_small():
    for p in (2, 3):
        for num in range(-40, 41):
            for e in range(0, 4):
                x = F(num, p**e)
                assert padic_fractional_part(x, p) == frac_part_digits(x, p)


def test_product_formula():
    rng = random.Random(2)
    for _ in range(300):
        x = F(rng.randint(-10**6, 10**6), rng.randint(1, 10**6))
        defect = product_formula_defect(x)
        assert isinstance(defect, int)
        total = sum(
            padic_fractional_part(x, p)
            for p in {f for f in _prime_factors(x.denominator)}
        )
        assert x - total == defect


def _prime_factors(n: int):
    out, d = set(), 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out


def test_crt_congruence_solve():
    rng = random.Random(3)
    for _ in range(100):
        targets = {}
        for p in rng.sample([2, 3, 5, 7], rng.randint(1, 4)):
            targets[p] = F(rng.randint(-p**4, p**4), p ** rng.randint(1, 4))
        q = crt_congruence_solve(targets)
        assert 0 <= q < 1
        for p, x in targets.items():
            v = padic_valuation(q - x, p)
            assert v is PADIC_INFINITY or v >= 0
        for p in {2, 3, 5, 7} - set(targets):
            v = padic_valuation(q, p)
            assert v is PADIC_INFINITY or v >= 0


def test_phase_arithmetic():
    a = Phase(F(1, 3))
    b = Phase(F(1, 2))
    assert (a * b).turns == F(5, 6)
    assert a.conjugate().turns == F(2, 3)
    assert a.is_exact and not Phase(F(0), 0.25).is_exact
    assert Phase(F(7, 7)).is_one()
    assert abs(phase_complex(a) - a.to_complex()) < 1e-15


def test_pruefer_characters():
    z = PrueferElement.from_rational(F(1, 4), 2)
    assert (z.p, z.k, z.n) == (2, 1, 2)
    got = pruefer_char_eval(z, F(3))
    assert got.turns == F(3, 4)
    with pytest.raises(ValueError):
        PrueferElement.from_rational(F(1, 3), 2)


def test_exact_complex_zero_detection():
    # 1 + zeta_3 + zeta_3^2 = 0, detected exactly through cyclotomic reduction
    total = sum(
        (ExactComplex.from_phase(Phase(F(k, 3))) for k in range(3)),
        ExactComplex(),
    )
    assert total.is_zero()
    # primitive-root sums for several orders
    for n in (2, 4, 5, 6, 8, 9, 12):
        total = sum(
            (ExactComplex.from_phase(Phase(F(k, n))) for k in range(n)),
            ExactComplex(),
        )
        assert total.is_zero(), n


def test_exact_complex_ring_ops():
    z = ExactComplex.from_phase(Phase(F(1, 8)))
    assert z * z == ExactComplex.from_phase(Phase(F(1, 4)))
    assert (z * z.conjugate()).rational_value() == 1
    w = z + z.conjugate()  # 2 cos(pi/4) = sqrt(2)
    assert abs(w.to_complex() - math.sqrt(2)) < 1e-15
    assert not w.is_zero()
    assert (w * w).rational_value() == 2
