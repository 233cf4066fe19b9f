"""Gabor frame machinery on the real line for rational density.

Frame bounds come from extremal eigenvalues of Zibulski-Zeevi matrices built
from Zak-transform fibers.  The canonical dual window is computed two ways --
a Neumann series in the twisted coefficient algebra of the adjoint lattice,
and a direct grid discretization of the frame operator (Walnut form) -- and
the two answers are cross-checked.  Tight windows use the grid operator's
inverse square root.  Dual and tight windows are returned as finite
combinations of adjoint-lattice time-frequency shifts of the original window.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Tuple

import numpy as np
from scipy.linalg import eigh, lstsq, solve

from .windows import (
    AccuracyError,
    CoefficientSequence,
    FiniteCombo,
    RectLattice,
    Window,
    janssen_coefficients,
    tf_inner_product_real,
)

__all__ = [
    "FrameBounds",
    "NotAFrameError",
    "canonical_dual",
    "frame_bounds_rational",
    "tight_window",
]

MAX_DENSITY_DENOM = 128


class NotAFrameError(RuntimeError):
    """The window fails to generate a frame for the requested lattice."""


@dataclass(frozen=True)
class FrameBounds:
    """Lower/upper frame bound estimates; iterable as the pair (A, B)."""

    lower: float
    upper: float
    zak_zero_detected: bool = False
    density: Tuple[int, int] = (1, 1)  # alpha*beta as P/Q

    def __iter__(self):
        return iter((self.lower, self.upper))


def _density_fraction(lat: RectLattice, max_denom: int = MAX_DENSITY_DENOM) -> Fraction:
    frac = Fraction(lat.alpha * lat.beta).limit_denominator(max_denom)
    if abs(float(frac) - lat.alpha * lat.beta) > 1e-9:
        raise ValueError(
            f"lattice density {lat.alpha * lat.beta!r} is not rational with "
            f"numerator/denominator <= {max_denom}"
        )
    return frac


def _zak_fibers(g: Window, lat: RectLattice, P: int, Q: int, t: np.ndarray, nu: np.ndarray) -> np.ndarray:
    """H[s, i, it, inu] = Zak_c(T_{s*alpha} g)(t, nu + i/P) with c = 1/beta."""
    c = 1.0 / lat.beta
    half = g.support_halfwidth(1e-16)
    tmax = c + Q * lat.alpha
    kmax = int(math.ceil((half + tmax) / c)) + 1
    ks = np.arange(-kmax, kmax + 1)
    # sample g on every needed translate at once
    # points: t[it] - s*alpha + k*c
    tt = t[None, None, :] - lat.alpha * np.arange(Q)[:, None, None] + c * ks[None, :, None]
    gv = g.values(tt.ravel()).reshape(tt.shape)  # (Q, nk, nt)
    freqs = nu[None, :] + (np.arange(P) / P)[:, None]  # (P, nnu)
    phases = np.exp(2j * math.pi * ks[:, None, None] * freqs[None, :, :])  # (nk, P, nnu)
    # H[s, i, it, inu]
    return np.einsum("skt,kin->sitn", gv, phases)


def frame_bounds_rational(g: Window, lat: RectLattice, grid_density: int = 64) -> FrameBounds:
    """Optimal-frame-bound estimates for the Gabor system of g over lat.

    Requires alpha*beta = P/Q rational with small numerator and denominator.
    The reported lower bound is a sampled minimum (hence an upper bound for
    the true optimal A) and the upper bound a sampled maximum.
    """
    if grid_density < 1:
        raise ValueError("grid_density must be >= 1")
    frac = _density_fraction(lat)
    P, Q = frac.numerator, frac.denominator
    c = 1.0 / lat.beta

    t = (np.arange(grid_density) / grid_density) * c
    nu = (np.arange(grid_density) / grid_density) / P
    H = _zak_fibers(g, lat, P, Q, t, nu)  # (Q, P, nt, nnu)

    # M(t, nu) = (c/P) * W^H W with W[s, i] = H_s(t, nu + i/P)
    W = np.moveaxis(H, (0, 1), (2, 3))  # (nt, nnu, Q, P)
    M = (c / P) * np.einsum("tnsi,tnsj->tnij", W.conj(), W)
    eigs = np.linalg.eigvalsh(M.reshape(-1, P, P))
    lower = float(eigs[:, 0].min())
    upper = float(eigs[:, -1].max())

    zak_zero = False
    if lower <= 1e-12 * max(upper, 1.0):
        lower, zak_zero = 0.0, True

    # trace identity sanity check: A <= ||g||^2/(alpha beta) <= B
    mid = g.l2_norm_sq() / (lat.alpha * lat.beta)
    if not (lower <= mid * (1 + 1e-8) + 1e-12 and mid <= upper * (1 + 1e-8) + 1e-12):
        raise AccuracyError(
            f"frame-bound trace identity violated: A={lower}, ||g||^2/(ab)={mid}, B={upper}"
        )
    return FrameBounds(lower=lower, upper=upper, zak_zero_detected=zak_zero, density=(P, Q))


def _checked_bounds(g: Window, lat: RectLattice, grid_density: int = 64) -> FrameBounds:
    fb = frame_bounds_rational(g, lat, grid_density)
    if fb.lower <= 0.0 or fb.upper <= 0.0:
        raise NotAFrameError(
            f"no frame: bound estimates A={fb.lower}, B={fb.upper} "
            f"at density {fb.density[0]}/{fb.density[1]}"
        )
    return fb


def _estimate_bounds(g: Window, lat: RectLattice, grid_density: int = 64) -> Tuple[FrameBounds, bool]:
    """(bounds, commensurable): exact-density bounds where possible, otherwise
    slightly widened estimates from the nearest small-rational density (the
    bounds vary continuously in beta, so a <= 5e-3 density perturbation is
    absorbed by the widening)."""
    try:
        return _checked_bounds(g, lat, grid_density), True
    except ValueError:
        dens = lat.alpha * lat.beta
        frac = Fraction(dens).limit_denominator(MAX_DENSITY_DENOM)
        if float(frac) <= 0 or abs(float(frac) - dens) > 5e-3:
            raise
        snapped = RectLattice(lat.alpha, float(frac) / lat.alpha)
        fb = _checked_bounds(g, snapped, grid_density)
        pad = 0.05 * (fb.upper - fb.lower) + 5e-3 * fb.upper
        widened = FrameBounds(
            lower=max(fb.lower - pad, 0.0),
            upper=fb.upper + pad,
            zak_zero_detected=fb.zak_zero_detected,
            density=fb.density,
        )
        if widened.lower <= 0.0:
            raise NotAFrameError(
                f"no frame certificate at density {dens!r}: snapped bound estimates "
                f"A={fb.lower}, B={fb.upper} leave no margin"
            )
        return widened, False


# ---------------------------------------------------------------------------
# grid discretization (Walnut representation of the frame operator)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Grid:
    """Uniform grid resolving both the lattice and its adjoint exactly."""

    delta: float
    points: np.ndarray
    step_alpha: int  # alpha = step_alpha * delta
    step_invbeta: int  # 1/beta = step_invbeta * delta

    @property
    def size(self) -> int:
        return self.points.size


def _make_grid(g: Window, lat: RectLattice, tol: float, fit_radius: int = 6) -> _Grid:
    frac = _density_fraction(lat)
    P, Q = frac.numerator, frac.denominator
    # base step alpha/P = 1/(beta*Q) resolves both the lattice and its
    # adjoint; oversample so the spacing is at most min(alpha, 1/beta)/16 and
    # the fit modulations l/alpha (|l| <= fit_radius) stay below Nyquist
    over = max(
        2,
        math.ceil(16 * lat.alpha / (P * min(lat.alpha, 1.0 / lat.beta))),
        math.ceil((2 * fit_radius + 4) / P),
    )
    delta = lat.alpha / (P * over)
    half = g.support_halfwidth(tol / 10.0)
    # padding must cover the adjoint-lattice shifts used by the combo fits
    pad = (fit_radius + 2.0) / lat.beta + 2.0 * lat.alpha
    n_half = int(math.ceil((half + pad) / delta))
    points = np.arange(-n_half, n_half + 1) * delta
    return _Grid(delta=delta, points=points, step_alpha=P * over, step_invbeta=Q * over)


def _frame_operator_matrix(g: Window, lat: RectLattice, grid: _Grid) -> np.ndarray:
    """The Walnut form S[i,j] = (1/beta) * G_k(t_i) for t_j = t_i - k/beta,
    where G_k(t) = sum_n g(t - n*alpha) conj(g(t - n*alpha - k/beta)).
    """
    t = grid.points
    half = g.support_halfwidth(1e-16)
    n_max = int(math.ceil((t[-1] + half) / lat.alpha)) + 1
    ns = np.arange(-n_max, n_max + 1)
    shifts = g.values((t[None, :] - lat.alpha * ns[:, None]).ravel()).reshape(ns.size, t.size)

    k_max = int(math.ceil(2.0 * half * lat.beta)) + 1
    N = grid.size
    S = np.zeros((N, N), dtype=complex)
    for k in range(-k_max, k_max + 1):
        off = k * grid.step_invbeta
        if abs(off) >= N:
            continue
        shifted = g.values((t[None, :] - lat.alpha * ns[:, None] - k / lat.beta).ravel()).reshape(
            ns.size, t.size
        )
        Gk = (shifts * shifted.conj()).sum(axis=0) / lat.beta
        idx = np.arange(max(0, off), min(N, N + off))
        S[idx, idx - off] = Gk[idx]
    return S


def _adjoint_atom_matrix(g: Window, lat: RectLattice, grid: _Grid, radius: int) -> Tuple[np.ndarray, list]:
    """Columns sample E_{l/alpha} T_{k/beta} g on the grid, in deterministic order."""
    t = grid.points
    keys = sorted(
        ((k, l) for k in range(-radius, radius + 1) for l in range(-radius, radius + 1)),
        key=lambda kl: (max(abs(kl[0]), abs(kl[1])), kl),
    )
    cols = []
    for k, l in keys:
        cols.append(np.exp(2j * math.pi * (l / lat.alpha) * t) * g.values(t - k / lat.beta))
    return np.column_stack(cols), keys


def _fit_combo(
    g: Window,
    lat: RectLattice,
    grid: _Grid,
    target: np.ndarray,
    tol: float,
    max_radius: int = 12,
) -> Tuple[FiniteCombo, Dict[Tuple[int, int], complex]]:
    """Least-squares fit of target samples by adjoint-lattice shifts of g."""
    # samples near the grid boundary carry truncation error from the frame
    # operator solve; fit only against the interior
    margin = 2.0 / lat.beta + lat.alpha
    interior = np.abs(grid.points) <= grid.points[-1] - margin
    norm = math.sqrt(grid.delta) * np.linalg.norm(target[interior])
    atom_norm = math.sqrt(g.l2_norm_sq())
    for radius in range(2, max_radius + 1):
        atoms, keys = _adjoint_atom_matrix(g, lat, grid, radius)
        # atoms sticking out of the grid would get spurious large coefficients
        sampled = math.sqrt(grid.delta) * np.linalg.norm(atoms[interior], axis=0)
        keep = sampled >= 0.9 * atom_norm
        if not keep.all():
            atoms = atoms[:, keep]
            keys = [kl for kl, ok in zip(keys, keep) if ok]
            if radius > 2 and keep.sum() == prev_count:
                break  # grid exhausted: larger radii add nothing
        prev_count = len(keys)
        coeffs, *_ = lstsq(atoms[interior], target[interior], lapack_driver="gelsd")
        resid = math.sqrt(grid.delta) * np.linalg.norm(atoms[interior] @ coeffs - target[interior])
        if resid <= tol * max(norm, 1.0):
            entries = {kl: complex(cf) for kl, cf in zip(keys, coeffs) if abs(cf) > 1e-15}
            combo = FiniteCombo(
                tuple(
                    (entries[kl], kl[0] / lat.beta, kl[1] / lat.alpha, g)
                    for kl in sorted(entries, key=lambda kl: (max(abs(kl[0]), abs(kl[1])), kl))
                )
            )
            return combo, entries
    raise AccuracyError(
        f"adjoint-shift fit residual {resid:.3e} above {tol:.1e} at radius {max_radius}"
    )


# ---------------------------------------------------------------------------
# twisted coefficient algebra over the adjoint lattice (Neumann inversion)
# ---------------------------------------------------------------------------


def _twisted_convolve_grid(
    a: Dict[Tuple[int, int], complex],
    b: Dict[Tuple[int, int], complex],
    density: float,
    radius: int,
) -> Tuple[Dict[Tuple[int, int], complex], float]:
    """Convolution matching operator composition on the adjoint lattice:
    pi(k1,l1) pi(k2,l2) = exp(-2 pi i l2 k1 / (alpha beta)) pi(k1+k2, l1+l2).
    Entries landing outside the radius are dropped; their l^1 mass is returned.
    """
    out: Dict[Tuple[int, int], complex] = {}
    dropped = 0.0
    for (k1, l1), va in a.items():
        for (k2, l2), vb in b.items():
            k, l = k1 + k2, l1 + l2
            val = va * vb * cmath.exp(-2j * math.pi * l2 * k1 / density)
            if max(abs(k), abs(l)) > radius:
                dropped += abs(val)
                continue
            out[(k, l)] = out.get((k, l), 0.0 + 0.0j) + val
    return out, dropped


def _neumann_dual_coeffs(
    g: Window, lat: RectLattice, fb: FrameBounds, tol: float
) -> Tuple[Dict[Tuple[int, int], complex], float]:
    """Coefficients d with S^{-1} g = sum d(k,l) E_{l/alpha} T_{k/beta} g,
    from the splitting S = ((A+B)/2)(I - R), ||R|| <= (B-A)/(B+A).
    """
    density = lat.alpha * lat.beta
    ratio = (fb.upper - fb.lower) / (fb.upper + fb.lower)
    if ratio >= 1.0:
        raise NotAFrameError("Neumann splitting has no contraction: bounds straddle zero")

    # Janssen representation S = (1/(alpha beta)) sum <g, pi(k,l) g> pi(k,l)
    radius = 4
    cs = janssen_coefficients(g, g, lat, radius, tol / 100.0)
    while cs.tail_bound / density > tol / 10.0 and radius < 40:
        radius += 2
        cs = janssen_coefficients(g, g, lat, radius, tol / 100.0)
    s_coef = {kl: v / density for kl, v in cs.entries.items() if abs(v) > 1e-18}

    scale = 2.0 / (fb.lower + fb.upper)
    r_coef = {kl: -scale * v for kl, v in s_coef.items()}
    r_coef[(0, 0)] = r_coef.get((0, 0), 0.0) + 1.0

    work_radius = 3 * radius
    term: Dict[Tuple[int, int], complex] = {(0, 0): 1.0 + 0.0j}
    total = dict(term)
    drop_total = cs.tail_bound / density * scale
    for it in range(1, 4000):
        term, dropped = _twisted_convolve_grid(term, r_coef, density, work_radius)
        drop_total += dropped
        update = sum(abs(v) for v in term.values())
        for kl, v in term.items():
            total[kl] = total.get(kl, 0.0 + 0.0j) + v
        if update < tol / 10.0:
            break
    else:
        raise AccuracyError(
            f"Neumann iteration did not converge; contraction estimate {ratio:.4f}"
        )
    return {kl: scale * v for kl, v in total.items() if abs(v) > 1e-16}, scale * drop_total


# ---------------------------------------------------------------------------
# public dual / tight constructions
# ---------------------------------------------------------------------------


def _sample(w: Window, grid: _Grid) -> np.ndarray:
    return w.values(grid.points)


def canonical_dual(g: Window, lat: RectLattice, method: str = "grid", tol: float = 1e-8) -> Window:
    """The canonical dual window S^{-1} g as a finite combination of
    adjoint-lattice time-frequency shifts of g.

    method "grid" inverts a discretized frame operator and fits the result;
    method "neumann" inverts in the twisted coefficient algebra.  The two are
    cross-checked against each other within 10*tol on the reference grid.
    Densities that are not small rationals (so no common grid resolves the
    lattice and its adjoint) always use the Neumann construction.
    """
    if method not in ("grid", "neumann"):
        raise ValueError(f"unknown method {method!r}")
    fb, commensurable = _estimate_bounds(g, lat)

    coeffs, _ = _neumann_dual_coeffs(g, lat, fb, tol)
    combo_neumann = FiniteCombo(
        tuple(
            (coeffs[kl], kl[0] / lat.beta, kl[1] / lat.alpha, g)
            for kl in sorted(coeffs, key=lambda kl: (max(abs(kl[0]), abs(kl[1])), kl))
        )
    )
    if not commensurable:
        return combo_neumann

    # the Neumann coefficients reveal how far the dual's adjoint-lattice
    # expansion reaches; size the grid and the fit accordingly
    reach = max(
        (max(abs(k), abs(l)) for (k, l), v in coeffs.items() if abs(v) > tol / 100.0),
        default=2,
    )
    grid = _make_grid(g, lat, tol, fit_radius=reach + 2)
    S = _frame_operator_matrix(g, lat, grid)
    g_samp = _sample(g, grid)
    dual_samp = solve(S, g_samp, assume_a="her")

    combo_grid, _ = _fit_combo(g, lat, grid, dual_samp, tol, max_radius=reach + 2)

    diff = _sample(combo_grid, grid) - _sample(combo_neumann, grid)
    err = math.sqrt(grid.delta) * np.linalg.norm(diff)
    if err > 10 * tol:
        raise AccuracyError(f"grid and Neumann duals disagree: L2 distance {err:.3e}")
    return combo_grid if method == "grid" else combo_neumann


def tight_window(g: Window, lat: RectLattice, tol: float = 1e-8) -> Window:
    """The canonical tight window S^{-1/2} g, as a finite combination of
    adjoint-lattice shifts; its own frame operator is the identity within tol.
    """
    fb = _checked_bounds(g, lat)
    # S^{-1/2} g has at least the decay of the canonical dual's expansion;
    # use the same reach estimate to size the grid
    coeffs, _ = _neumann_dual_coeffs(g, lat, fb, tol)
    reach = max(
        (max(abs(k), abs(l)) for (k, l), v in coeffs.items() if abs(v) > tol / 100.0),
        default=2,
    )
    grid = _make_grid(g, lat, tol, fit_radius=reach + 2)
    S = _frame_operator_matrix(g, lat, grid)
    vals, vecs = eigh(S)
    floor = max(fb.lower * 0.5, 1e-12 * vals[-1])
    inv_sqrt = 1.0 / np.sqrt(np.clip(vals, floor, None))
    root = (vecs * inv_sqrt) @ vecs.conj().T
    tight_samp = root @ _sample(g, grid)
    combo, _ = _fit_combo(g, lat, grid, tight_samp, tol, max_radius=reach + 2)
    return combo
