"""Heisenberg-module layer: cocycles, twisted algebra, inner products,
axiom check, and the projection criterion."""

import math
import random
from fractions import Fraction as F

import numpy as np
import pytest

from adelic_gabor import (
    Box,
    FiniteCombo,
    Gaussian,
    GroupSelector,
    ModuleAlgebraTag,
    ModuleElement,
    NotAFrameError,
    RectLattice,
    SeparableWindow,
    canonical_dual,
    cocycle,
    module_axiom_check,
    module_inner,
    projection_check,
    tight_window,
    twisted_convolve,
    twisted_involution,
)

ADELE = GroupSelector.adele()


def _op_values(side, alpha, beta, lam, grid, f_vals):
    """Apply the single shift indexed by lam to samples on a uniform grid.

    LeftA applies E_{beta r} T_{alpha q}; RightB applies the adjoint of the
    adjoint-lattice shift E_{r/alpha} T_{q/beta}.  Shifts must land on grid
    points, so this oracle only supports grid-aligned lattices.
    """
    q, r = lam
    if side == "LeftA":
        a, b = alpha * float(q), beta * float(r)
        phase = 1.0
    else:
        a, b = -float(q) / beta, -float(r) / alpha
        # (E_b T_a)* = e^{2 pi i a b} E_{-b} T_{-a}
        phase = np.exp(2j * math.pi * (float(q) / beta) * (float(r) / alpha))
    step = grid[1] - grid[0]
    n = round(a / step)
    assert abs(n * step - a) < 1e-12, "oracle needs grid-aligned shifts"
    shifted = np.zeros_like(f_vals)
    if n >= 0:
        if n < len(f_vals):
            shifted[n:] = f_vals[: len(f_vals) - n]
    else:
        shifted[:n] = f_vals[-n:]
    return phase * np.exp(2j * math.pi * b * grid) * shifted


@pytest.mark.parametrize("side", ["LeftA", "RightB"])
def test_cocycle_matches_operator_composition(side):
    """c(l1,l2) must satisfy pi(l1) pi(l2) = c pi(l1+l2) as operators."""
    alpha, beta = 0.5, 0.25
    tag = ModuleAlgebraTag(side, ADELE, alpha, beta)
    grid = np.arange(-40.0, 40.0, 1.0 / 16.0)
    f_vals = Gaussian().values(grid).astype(complex)
    rng = random.Random(7)
    worst = 0.0
    for _ in range(20):
        l1 = (F(rng.randint(-3, 3)), F(rng.randint(-3, 3)))
        l2 = (F(rng.randint(-3, 3)), F(rng.randint(-3, 3)))
        lsum = (l1[0] + l2[0], l1[1] + l2[1])
        lhs = _op_values(side, alpha, beta, l1, grid,
                         _op_values(side, alpha, beta, l2, grid, f_vals))
        rhs = cocycle(l1, l2, tag).to_complex() * _op_values(side, alpha, beta, lsum, grid, f_vals)
        mask = np.abs(rhs) > 1e-14
        worst = max(worst, float(np.max(np.abs(lhs - rhs)[mask], initial=0.0)))
    assert worst < 1e-10


def test_delta_is_unit():
    tag = ModuleAlgebraTag("LeftA", ADELE, 0.5, 0.5)
    rng = random.Random(9)
    a = ModuleElement(
        tag,
        {(F(rng.randint(-4, 4)), F(rng.randint(-4, 4))): complex(rng.gauss(0, 1), rng.gauss(0, 1))
         for _ in range(12)},
    )
    e = ModuleElement.delta(tag)
    assert twisted_convolve(e, a).coefficients == a.coefficients
    assert twisted_convolve(a, e).coefficients == a.coefficients


def test_involution_antihomomorphism():
    tag = ModuleAlgebraTag("LeftA", ADELE, 0.5, 0.75)
    rng = random.Random(11)

    def rand_elt():
        return ModuleElement(
            tag,
            {(F(rng.randint(-3, 3)), F(rng.randint(-3, 3))): complex(rng.gauss(0, 1), rng.gauss(0, 1))
             for _ in range(8)},
        )

    a, b = rand_elt(), rand_elt()
    lhs = twisted_involution(twisted_convolve(a, b))
    rhs = twisted_convolve(twisted_involution(b), twisted_involution(a))
    keys = set(lhs.coefficients) | set(rhs.coefficients)
    gap = max(abs(lhs.coefficients.get(k, 0) - rhs.coefficients.get(k, 0)) for k in keys)
    assert gap < 1e-12
    # involution is isometric and involutive
    assert twisted_involution(twisted_involution(a)).coefficients == pytest.approx(a.coefficients)
    assert twisted_involution(a).l1_norm() == pytest.approx(a.l1_norm())


def test_l1_submultiplicative():
    tag = ModuleAlgebraTag("RightB", ADELE, 0.5, 0.5)
    rng = random.Random(13)
    for _ in range(10):
        a = ModuleElement(
            tag, {(F(rng.randint(-3, 3)), F(rng.randint(-3, 3))): rng.gauss(0, 1) for _ in range(6)}
        )
        b = ModuleElement(
            tag, {(F(rng.randint(-3, 3)), F(rng.randint(-3, 3))): rng.gauss(0, 1) for _ in range(6)}
        )
        assert twisted_convolve(a, b).l1_norm() <= a.l1_norm() * b.l1_norm() + 1e-12


def test_module_inner_gaussian_origin():
    g = SeparableWindow(Gaussian(), {}, ADELE)
    a = module_inner(g, g, "LeftA", ADELE, 2**-0.5, 2**-0.5, trunc=(3, 3))
    assert a.support_in_integers()
    assert a.coefficients[(F(0), F(0))] == pytest.approx(2**-0.5, abs=1e-15)
    assert a.tail_bound > 0


def test_module_inner_rightb_scaling():
    g = SeparableWindow(Gaussian(), {}, ADELE)
    alpha = beta = 0.5
    b = module_inner(g, g, "RightB", ADELE, alpha, beta, trunc=(3, 2))
    # origin coefficient is <g,g>/(alpha beta) = 2^(-1/2) / 0.25
    assert b.coefficients[(F(0), F(0))] == pytest.approx(2**-0.5 / (alpha * beta), abs=1e-12)


def test_axiom_check_box_onb():
    g = SeparableWindow(Box(1.0), {}, ADELE)
    rep = module_axiom_check(g, g, g, ADELE, 1.0, 1.0, trunc=(3, 4))
    assert rep.verdict == "axiom-holds"
    assert rep.associativity_residual < 1e-12
    assert rep.b_inner_vs_delta < 1e-12
    assert rep.reconstruction_residual is not None and rep.reconstruction_residual < 1e-12


def test_axiom_check_gaussian_dual():
    alpha = beta = 2**-0.5
    g = Gaussian()
    rect = RectLattice(alpha, beta)
    h = canonical_dual(g, rect, method="grid", tol=1e-10)
    sg = SeparableWindow(g, {}, ADELE)
    sh = SeparableWindow(h, {}, ADELE)
    rep = module_axiom_check(sg, sg, sh, ADELE, alpha, beta, trunc=(3, 6))
    assert rep.verdict == "axiom-holds"
    assert rep.associativity_residual < 1e-6
    assert rep.b_inner_vs_delta < 1e-6
    assert rep.reconstruction_residual is not None and rep.reconstruction_residual < 1e-6


def test_projection_box_onb():
    rep = projection_check(Box(1.0), 1.0, 1.0, ADELE, trunc=(3, 4), tol=1e-10)
    assert rep.verdict == "projection"
    assert rep.idempotency_residual < 1e-12
    assert rep.self_adjointness_residual < 1e-12
    assert rep.tail_bound < 1e-10


def test_projection_critical_density_not_a_frame():
    rep = projection_check(Gaussian(), 1.0, 1.0, ADELE, trunc=(3, 4), tol=1e-8)
    assert rep.verdict == "not-a-frame"
    assert rep.idempotency_residual is None


def test_tight_window_projection_support():
    alpha = beta = 2**-0.5
    gamma = tight_window(Gaussian(), RectLattice(alpha, beta), tol=1e-10)
    sg = SeparableWindow(gamma, {}, ADELE)
    a = module_inner(sg, sg, "LeftA", ADELE, alpha, beta, trunc=(3, 3))
    assert a.support_in_integers()
