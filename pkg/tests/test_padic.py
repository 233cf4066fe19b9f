"""p-adic test functions: ball integrals, shifts, exact inner products."""

import random
from fractions import Fraction as F

import pytest

from adelic_gabor import (
    ExactComplex,
    PAdicBall,
    PAdicTestFunction,
    Phase,
    PrueferElement,
    S0ZpSeries,
    char_ball_integral,
    inner_product_padic,
    s0_norm,
    s0_norm_qp,
    tf_shift_padic,
)
from adelic_gabor.exact import padic_fractional_part

from oracles import char_integral_oracle


def _random_tf(rng: random.Random, p: int, nterms: int = 2) -> PAdicTestFunction:
    terms = []
    for _ in range(nterms):
        level = rng.randint(-1, 2)
        center = F(rng.randint(-p**3, p**3), p ** rng.randint(0, 2))
        freq = F(rng.randint(-p**3, p**3), p ** rng.randint(0, 2))
        coeff = ExactComplex.from_phase(Phase(F(rng.randint(0, 11), 12)), F(rng.randint(1, 3)))
        terms.append((coeff, freq, PAdicBall(p, center, level)))
    return PAdicTestFunction.from_absolute_terms(p, terms)


def test_char_ball_integral_against_riemann_oracle():
    rng = random.Random(11)
    for p in (2, 3, 5):
        for _ in range(60):
            ball = PAdicBall(p, F(rng.randint(-p**5, p**5), p ** rng.randint(0, 4)), rng.randint(-4, 4))
            r = F(rng.randint(-p**5, p**5), p ** rng.randint(0, 5))
            got = char_ball_integral(r, ball)
            mag, turns = char_integral_oracle(r, ball)
            want = ExactComplex.from_phase(Phase(turns), mag) if mag else ExactComplex()
            assert got == want


def test_unit_indicator():
    for p in (2, 3, 5, 7):
        unit = PAdicTestFunction.unit(p)
        assert unit.is_unit_indicator()
        assert inner_product_padic(unit, unit).rational_value() == 1
        assert unit.evaluate(F(0)).rational_value() == 1
        assert unit.evaluate(F(1, p)).is_zero()


def test_shift_pointwise_identity():
    rng = random.Random(12)
    for p in (2, 3):
        for _ in range(20):
            f = _random_tf(rng, p)
            x = F(rng.randint(-p**2, p**2), p ** rng.randint(0, 2))
            r = F(rng.randint(-p**2, p**2), p ** rng.randint(0, 2))
            g = tf_shift_padic(f, x, r)
            for _ in range(5):
                t = F(rng.randint(-p**3, p**3), p ** rng.randint(0, 3))
                phase = Phase(-padic_fractional_part(r * t, p))
                assert g.evaluate(t) == f.evaluate(t - x) * phase


def _small_tf(rng: random.Random, p: int, nterms: int = 2) -> PAdicTestFunction:
    """Terms with integer centers, levels in [0,2], frequency denominator <= p^2:
    locally constant at level 2 and supported in [-9, 9] intersect Z_p cosets."""
    terms = []
    for _ in range(nterms):
        ball = PAdicBall(p, F(rng.randint(-8, 8)), rng.randint(0, 2))
        freq = F(rng.randint(-p**3, p**3), p ** rng.randint(0, 2))
        coeff = ExactComplex.from_phase(Phase(F(rng.randint(0, 11), 12)), F(rng.randint(1, 3)))
        terms.append((coeff, freq, ball))
    return PAdicTestFunction.from_absolute_terms(p, terms)


def test_inner_product_riemann_sum():
    rng = random.Random(13)
    for p in (2, 3):
        for _ in range(6):
            f = _small_tf(rng, p)
            g = _small_tf(rng, p)
            got = inner_product_padic(f, g)
            # integer centers with level >= 0 all live inside Z_p, where both
            # functions are locally constant at level 2: the exact Riemann sum
            # runs over the p^2 cosets of p^2 Z_p in Z_p
            total = ExactComplex()
            for j in range(p**2):
                total = total + f.evaluate(F(j)) * g.evaluate(F(j)).conjugate() * F(1, p**2)
            assert got == total


def test_shift_covariance():
    rng = random.Random(14)
    for p in (2, 3, 5):
        f = _random_tf(rng, p)
        g = _random_tf(rng, p)
        x = F(rng.randint(-p, p), p)
        r = F(rng.randint(-p, p), p)
        lhs = inner_product_padic(tf_shift_padic(f, x, r), tf_shift_padic(g, x, r))
        assert lhs == inner_product_padic(f, g)


def test_indicator_splitting_consistency():
    # the indicator of Z_p equals the sum of its p child indicators
    for p in (2, 3):
        unit = PAdicTestFunction.unit(p)
        total = None
        for child in PAdicBall.unit(p).children():
            ind = PAdicTestFunction.indicator(child)
            total = ind if total is None else total + ind
        assert total == unit


def test_prime_mismatch_rejected():
    with pytest.raises(ValueError):
        inner_product_padic(PAdicTestFunction.unit(2), PAdicTestFunction.unit(3))


def test_s0_norms():
    one = PrueferElement.from_rational(F(0), 2)
    z = PrueferElement.from_rational(F(1, 2), 2)
    series = S0ZpSeries(2, {one: 1.0, z: -0.5j})
    assert s0_norm(series) == pytest.approx(1.5)
    family = {F(0): series, F(1, 2): S0ZpSeries(2, {one: 2.0})}
    assert s0_norm_qp(family) == pytest.approx(3.5)
    with pytest.raises(ValueError):
        s0_norm_qp({F(3, 2): series})
