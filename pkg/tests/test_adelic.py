"""Adelic layer: embeddings, characters, reduction, Wexler-Raz, equivalence."""

import math
import random
from fractions import Fraction as F

import pytest

from adelic_gabor import (
    AdelicPoint,
    AdelicTFLattice,
    Box,
    Gaussian,
    GroupSelector,
    SeparableWindow,
    balian_low_scan,
    character_pair,
    fundamental_domain_reduce,
    lattice_embed,
    modulation_norm,
    promote_rational,
    theorem_equivalence_suite,
    tf_inner_product_group,
    tf_inner_product_real,
    wexler_raz_check,
)


def test_promote_rational():
    assert promote_rational(0.5) == F(1, 2)
    assert promote_rational(float(F(3, 7))) == F(3, 7)
    assert promote_rational(math.sqrt(2)) is None
    assert promote_rational(math.pi) is None


def test_lattice_embed_coordinates():
    A = GroupSelector.adele()
    x = lattice_embed(A, F(1, 2), F(5, 6))
    assert x.real_exact == F(5, 12)
    # diagonal embedding: every finite place carries q itself
    for p in (2, 3, 5, 7, 11):
        assert x.coordinate(p) == F(5, 6)

    rp = GroupSelector.real_x_qp(3)
    y = lattice_embed(rp, F(1, 2), F(5, 9))
    assert y.coordinate(3) == F(5, 9)
    with pytest.raises(ValueError):
        GroupSelector.real_x_qp(3).validate_index(F(1, 2))


def test_annihilator_exactness():
    rng = random.Random(31)
    for group in (GroupSelector.adele(), GroupSelector.real_x_qp(2), GroupSelector.real()):
        for _ in range(50):
            if group.variant == "rxqp":
                q = F(rng.randint(-50, 50), 2 ** rng.randint(0, 4))
                r = F(rng.randint(-50, 50), 2 ** rng.randint(0, 4))
            elif group.variant == "adele":
                q = F(rng.randint(-50, 50), rng.randint(1, 60))
                r = F(rng.randint(-50, 50), rng.randint(1, 60))
            else:
                q, r = F(rng.randint(-50, 50)), F(rng.randint(-50, 50))
            alpha = F(rng.randint(1, 12), rng.randint(1, 12))
            x = lattice_embed(group, alpha, q)
            y = lattice_embed(group, 1 / alpha, r)
            phase = character_pair(x, y, group)
            assert phase.is_exact and phase.is_one(), (group.variant, q, r, alpha)


def test_character_pair_real_part():
    A = GroupSelector.adele()
    x = AdelicPoint(F(1, 3), {})
    y = AdelicPoint(F(1, 2), {})
    assert character_pair(x, y, A).turns == F(1, 6)


def test_fundamental_domain_spec_example():
    A = GroupSelector.adele()
    x = AdelicPoint(1.7, {2: F(1, 2)})
    b, q = fundamental_domain_reduce(x, 1, A)
    assert q == F(3, 2)
    assert abs(b.real_float - 0.2) < 1e-12
    assert b.coordinate(2) == F(-1)


def test_fundamental_domain_round_trips():
    rng = random.Random(32)
    A = GroupSelector.adele()
    for _ in range(60):
        alpha = F(rng.randint(1, 8), rng.randint(1, 8))
        q = F(rng.randint(-40, 40), rng.randint(1, 40))
        offset_real = rng.uniform(0, float(alpha) - 1e-9)
        offset = AdelicPoint(offset_real, {})
        x = offset + lattice_embed(A, alpha, q)
        b, q2 = fundamental_domain_reduce(x, alpha, A)
        assert q2 == q
        for p in b.active_primes():
            v = b.coordinate(p)
            assert v.denominator % p != 0  # finite part lies in Z_p
        assert abs(b.real_float - offset_real) < 1e-9


def test_group_factorization():
    # integer indices with default local parts: exactly the real factor
    rp = GroupSelector.real_x_qp(2)
    lat = AdelicTFLattice.create(rp, F(1, 2), F(1, 2))
    g = SeparableWindow(Gaussian(), {}, rp)
    got = tf_inner_product_group(g, g, (F(2), F(-1)), lat)
    want = tf_inner_product_real(Gaussian(), Gaussian(), 1.0, -0.5, 1e-12)
    assert got == want
    # negative valuation index: exactly zero
    assert tf_inner_product_group(g, g, (F(1, 2), F(0)), lat) == 0


def test_wexler_raz_box_onb():
    A = GroupSelector.adele()
    lat = AdelicTFLattice.create(A, 1, 1)
    g = SeparableWindow(Box(1.0), {}, A)
    rep = wexler_raz_check(g, g, lat, (2, 3), 1e-10)
    assert rep.verdict == "dual"
    assert rep.max_residual < 1e-14
    assert all(row.exact_zero for row in rep.rows if row.q.denominator > 1 or row.r.denominator > 1)


def test_wexler_raz_self_not_dual_oversampled():
    A = GroupSelector.adele()
    lat = AdelicTFLattice.create(A, F(1, 2), 1)
    g = SeparableWindow(Box(1.0), {}, A)
    rep = wexler_raz_check(g, g, lat, (2, 3), 1e-10)
    assert rep.verdict == "not dual"
    # origin row: <g, g> = 1 but expected alpha*beta = 1/2
    origin = next(r for r in rep.rows if (r.q, r.r) == (0, 0))
    assert origin.residual == pytest.approx(0.5)


def test_equivalence_suite_box():
    rep = theorem_equivalence_suite(Box(1.0), Box(1.0), 1.0, 1.0, 2, (2, 3), 1e-10)
    assert rep.verdict == "dual"
    assert rep.verdicts_coincide
    assert rep.nonint_rows_exact_zero
    assert rep.integer_row_max_disagreement < 1e-12


def test_modulation_norm_values():
    A = GroupSelector.adele()
    lat = AdelicTFLattice.create(A, 1, 1)
    g = SeparableWindow(Gaussian(), {}, A)
    sup = modulation_norm(g, g, lat, math.inf, math.inf, (1, 3))
    assert sup == pytest.approx(2**-0.5, abs=1e-12)  # attained at the origin
    l1 = modulation_norm(g, g, lat, 1, 1, (1, 3))
    assert l1 > sup
    with pytest.raises(ValueError):
        modulation_norm(g, g, lat, 0.5, 1)


def test_balian_low_scan_rows():
    rows = balian_low_scan(
        Gaussian(), [0.81, 1.0], GroupSelector.adele(), (1, 2), grid_density=16, compute_duals=False
    )
    assert rows[0].lower_bound > 0
    assert rows[1].refined_lower_bound < 1e-2
    assert rows[1].note == "not-a-frame"


def test_separable_window_validation():
    from adelic_gabor import PAdicTestFunction

    with pytest.raises(ValueError):
        SeparableWindow(Gaussian(), {2: PAdicTestFunction.unit(2)}, GroupSelector.real())
    with pytest.raises(ValueError):
        SeparableWindow(Gaussian(), {3: PAdicTestFunction.unit(2)}, GroupSelector.adele())
    rp = GroupSelector.real_x_qp(5)
    g = SeparableWindow(Gaussian(), {}, rp)
    assert g.has_default_part(5)
    assert g.active_primes() == []
