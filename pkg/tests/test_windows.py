"""Real-line windows: closed forms vs quadrature, combos, envelopes, Janssen."""

import cmath
import math
import random

import numpy as np
import pytest

from adelic_gabor import (
    BSplineWindow,
    Box,
    FiniteCombo,
    Gaussian,
    RectLattice,
    janssen_coefficients,
    parse_window,
    tf_inner_product_real,
)
from adelic_gabor.windows import (
    _pair_envelope,
    gaussian_envelope_table,
    gaussian_inner_table,
    ring_shifts,
)

from oracles import quad_inner


def test_gaussian_closed_form_vs_quadrature():
    g = Gaussian()
    rng = random.Random(21)
    for _ in range(10):
        a, b = rng.uniform(-2, 2), rng.uniform(-2, 2)
        got = tf_inner_product_real(g, g, a, b)
        want = quad_inner(g, g, a, b)
        assert abs(got - want) < 1e-10
    assert tf_inner_product_real(g, g, 0, 0).real == pytest.approx(2**-0.5, abs=1e-15)


def test_box_closed_form_vs_quadrature():
    rng = random.Random(22)
    for _ in range(10):
        g1, g2 = Box(rng.uniform(0.5, 2)), Box(rng.uniform(0.5, 2))
        a, b = rng.uniform(-1.5, 1.5), rng.uniform(-2, 2)
        got = tf_inner_product_real(g1, g2, a, b)
        want = quad_inner(g1, g2, a, b, breakpoints=(0, g1.gamma, a, a + g2.gamma))
        assert abs(got - want) < 1e-9, (a, b)


def test_bspline_vs_quadrature():
    w = BSplineWindow(2)
    for a, b in [(0.0, 0.0), (0.5, 0.3), (-1.0, 1.2)]:
        got = tf_inner_product_real(w, w, a, b, 1e-11)
        want = quad_inner(w, w, a, b, breakpoints=[k + s for k in range(-6, 7) for s in (0.0, a)])
        assert abs(got - want) < 1e-9


def test_combo_flattening_and_phases():
    g = Gaussian()
    rng = random.Random(23)
    for _ in range(6):
        terms1 = tuple(
            (complex(rng.uniform(-1, 1), rng.uniform(-1, 1)), rng.uniform(-1, 1), rng.uniform(-1, 1), g)
            for _ in range(2)
        )
        terms2 = tuple(
            (complex(rng.uniform(-1, 1), rng.uniform(-1, 1)), rng.uniform(-1, 1), rng.uniform(-1, 1), g)
            for _ in range(2)
        )
        w1, w2 = FiniteCombo(terms1), FiniteCombo(terms2)
        a, b = rng.uniform(-1, 1), rng.uniform(-1, 1)
        got = tf_inner_product_real(w1, w2, a, b)
        want = quad_inner(w1, w2, a, b)
        assert abs(got - want) < 1e-9


def test_nested_combo_values():
    g = Gaussian()
    inner = FiniteCombo(((1.5, 0.25, -0.5, g),))
    outer = FiniteCombo(((2.0 + 1.0j, 0.5, 0.75, inner),))
    t = np.linspace(-3, 3, 101)
    direct = (2.0 + 1.0j) * np.exp(2j * math.pi * 0.75 * t) * inner.values(t - 0.5)
    assert np.allclose(outer.values(t), direct, atol=1e-14)
    # flattened to a single Gaussian atom
    assert len(outer.atoms()) == 1 and isinstance(outer.atoms()[0][3], Gaussian)


def test_envelope_bounds_inner_products():
    rng = random.Random(24)
    windows = [Gaussian(), Box(1.0), FiniteCombo(((1.0, 0.3, -0.2, Gaussian()), (0.5j, -0.4, 0.6, Gaussian())))]
    for w in windows:
        for _ in range(15):
            a, b = rng.uniform(-3, 3), rng.uniform(-3, 3)
            val = abs(tf_inner_product_real(w, w, a, b))
            assert val <= _pair_envelope(w, w, a, b) + 1e-12


def test_gaussian_tables_match_scalar_path():
    combo = FiniteCombo(((1.0, 0.3, -0.2, Gaussian()), (0.5 - 0.25j, -0.4, 0.6, Gaussian())))
    shifts = np.array([[0.0, 0.0], [0.7, -0.3], [-1.2, 0.5], [2.0, 2.0]])
    vals = gaussian_inner_table(combo, combo, shifts)
    envs = gaussian_envelope_table(combo, combo, shifts)
    for (a, b), v, e in zip(shifts, vals, envs):
        assert abs(v - tf_inner_product_real(combo, combo, a, b)) < 1e-13
        assert abs(e - _pair_envelope(combo, combo, a, b)) < 1e-13
    with pytest.raises(ValueError):
        gaussian_inner_table(Box(1.0), Gaussian(), shifts)


def test_ring_shifts():
    assert ring_shifts(0, 1.0, 1.0).shape == (1, 2)
    ring = ring_shifts(3, 0.5, 2.0)
    assert len(ring) == 8 * 3
    ks = np.round(ring[:, 0] / 0.5).astype(int)
    ls = np.round(ring[:, 1] / 2.0).astype(int)
    assert np.all(np.maximum(np.abs(ks), np.abs(ls)) == 3)
    assert len({(k, l) for k, l in zip(ks, ls)}) == 24


def test_janssen_coefficients_origin_and_tail():
    g = Gaussian()
    lat = RectLattice(1.0, 0.5)
    cs = janssen_coefficients(g, g, lat, radius=3, tol=1e-12)
    assert cs.entries[(0, 0)] == pytest.approx(2**-0.5)
    # c(k, l) = <g, E_{l/alpha} T_{k/beta} g>
    got = cs.entries[(1, -2)]
    want = tf_inner_product_real(g, g, 1 / lat.beta, -2 / lat.alpha, 1e-12)
    assert abs(got - want) < 1e-14
    assert 0 < cs.tail_bound < 1e-9


def test_parse_window():
    assert isinstance(parse_window("gaussian"), Gaussian)
    assert parse_window("box:1.5").gamma == 1.5
    assert parse_window("bspline:3").order == 3
    with pytest.raises(ValueError):
        parse_window("wavelet")


def test_box_envelope_is_exact_magnitude():
    w = Box(1.0)
    for a, b in [(0.25, 0.7), (-0.5, 1.3), (0.0, 2.0)]:
        val = abs(tf_inner_product_real(w, w, a, b))
        assert val == pytest.approx(w.envelope(a, b), abs=1e-14)
