"""Windows on the real line and their time-frequency inner products.

The atoms are the Gaussian exp(-pi t^2), box indicators, cardinal B-splines,
and finite combinations of time-frequency shifts of those.  Gaussian-Gaussian
and box-box correlations have closed forms; everything else falls back to
adaptive quadrature.  Every window carries an analytic envelope dominating
its time-frequency correlations, which is what certifies truncation of all
lattice sums downstream.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import BSpline as _SciBSpline

__all__ = [
    "AccuracyError",
    "Box",
    "BSplineWindow",
    "CoefficientSequence",
    "FiniteCombo",
    "Gaussian",
    "RectLattice",
    "Window",
    "janssen_coefficients",
    "parse_window",
    "tf_inner_product_real",
]

SQRT_HALF = 1.0 / math.sqrt(2.0)


class AccuracyError(RuntimeError):
    """Raised when a requested tolerance cannot be certified."""

    def __init__(self, message: str, best_estimate=None):
        super().__init__(message)
        self.best_estimate = best_estimate


@dataclass(frozen=True)
class RectLattice:
    """The rectangular lattice alpha*Z x beta*Z; adjoint is (1/beta)Z x (1/alpha)Z."""

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError("lattice parameters must be positive")

    @property
    def covolume(self) -> float:
        return self.alpha * self.beta


class Window:
    """Base class; subclasses provide values, supports and envelopes."""

    def values(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def envelope(self, a: float, b: float) -> float:
        """An upper bound for |<w, E_b T_a w>|."""
        raise NotImplementedError

    def support_halfwidth(self, tol: float) -> float:
        """Half-width L with |w| below tol outside [-L, L] (after shifts)."""
        raise NotImplementedError

    def l2_norm_sq(self) -> float:
        return tf_inner_product_real(self, self, 0.0, 0.0, 1e-12).real

    def atoms(self) -> List[Tuple[complex, float, float, "Window"]]:
        """Flatten to a list of (coeff, time-shift, freq-shift, base atom)."""
        return [(1.0 + 0.0j, 0.0, 0.0, self)]

    def __call__(self, t):
        return self.values(np.asarray(t, dtype=float))


@dataclass(frozen=True)
class Gaussian(Window):
    """g0(t) = exp(-pi t^2)."""

    def values(self, t: np.ndarray) -> np.ndarray:
        return np.exp(-math.pi * t * t).astype(complex)

    def envelope(self, a: float, b: float) -> float:
        return SQRT_HALF * math.exp(-math.pi * (a * a + b * b) / 2.0)

    def support_halfwidth(self, tol: float) -> float:
        return math.sqrt(max(-math.log(max(tol, 1e-300)), 1.0) / math.pi)

    def l2_norm_sq(self) -> float:
        return SQRT_HALF


@dataclass(frozen=True)
class Box(Window):
    """The indicator of [0, gamma)."""

    gamma: float = 1.0

    def __post_init__(self) -> None:
        if self.gamma <= 0:
            raise ValueError("box width must be positive")

    def values(self, t: np.ndarray) -> np.ndarray:
        return ((t >= 0.0) & (t < self.gamma)).astype(complex)

    def envelope(self, a: float, b: float) -> float:
        # the closed form is exact, so its magnitude is the tight envelope
        overlap = self.gamma - abs(a)
        if overlap <= 0:
            return 0.0
        if b == 0:
            return overlap
        return min(overlap, abs(math.sin(math.pi * b * overlap)) / (math.pi * abs(b)))

    def support_halfwidth(self, tol: float) -> float:
        return self.gamma

    def l2_norm_sq(self) -> float:
        return self.gamma


@dataclass(frozen=True)
class BSplineWindow(Window):
    """The cardinal B-spline of the given order: 1_{[0,1)} convolved order-1 times."""

    order: int = 2

    def __post_init__(self) -> None:
        if self.order < 1:
            raise ValueError("order must be >= 1")

    def _spline(self):
        return _SciBSpline.basis_element(np.arange(self.order + 1.0), extrapolate=False)

    def values(self, t: np.ndarray) -> np.ndarray:
        if self.order == 1:
            return ((t >= 0.0) & (t < 1.0)).astype(complex)
        out = self._spline()(t)
        return np.nan_to_num(out).astype(complex)

    def envelope(self, a: float, b: float) -> float:
        # support [0, order]; Fourier transform is sinc^order
        overlap = self.order - abs(a)
        if overlap <= 0:
            return 0.0
        time_bound = min(1.0, overlap)
        if b == 0:
            return time_bound
        return min(time_bound, (1.0 / (math.pi * abs(b))) ** self.order)

    def support_halfwidth(self, tol: float) -> float:
        return float(self.order)


@dataclass(frozen=True)
class FiniteCombo(Window):
    """sum_i coeff_i * E_{b_i} T_{a_i} base_i."""

    terms: Tuple[Tuple[complex, float, float, Window], ...]

    def __post_init__(self) -> None:
        flat = []
        for coeff, a, b, base in self.terms:
            for c2, a2, b2, atom in base.atoms():
                # E_b T_a E_{b2} T_{a2} = exp(-2 pi i b2 a) E_{b+b2} T_{a+a2}
                phase = cmath.exp(-2j * math.pi * b2 * a)
                flat.append((complex(coeff) * c2 * phase, a + a2, b + b2, atom))
        object.__setattr__(self, "terms", tuple(flat))

    def atoms(self) -> List[Tuple[complex, float, float, Window]]:
        return list(self.terms)

    def values(self, t: np.ndarray) -> np.ndarray:
        total = np.zeros_like(t, dtype=complex)
        for coeff, a, b, base in self.terms:
            total += coeff * np.exp(2j * math.pi * b * t) * base.values(t - a)
        return total

    def envelope(self, a: float, b: float) -> float:
        total = 0.0
        for c1, a1, b1, w1 in self.terms:
            for c2, a2, b2, w2 in self.terms:
                if type(w1) is not type(w2):
                    base_env = max(w1.envelope(0, 0), w2.envelope(0, 0)) or 1.0
                    total += abs(c1) * abs(c2) * base_env
                    continue
                total += abs(c1) * abs(c2) * w1.envelope(a + a2 - a1, b + b2 - b1)
        return total

    def support_halfwidth(self, tol: float) -> float:
        return max(abs(a) + base.support_halfwidth(tol) for _, a, _, base in self.terms)

    def l2_norm_sq(self) -> float:
        return tf_inner_product_real(self, self, 0.0, 0.0, 1e-12).real


def parse_window(spec: str) -> Window:
    """Parse CLI window specs: "gaussian", "box:GAMMA", "bspline:ORDER"."""
    spec = spec.strip().lower()
    if spec == "gaussian":
        return Gaussian()
    if spec.startswith("box"):
        _, _, arg = spec.partition(":")
        return Box(float(arg) if arg else 1.0)
    if spec.startswith("bspline"):
        _, _, arg = spec.partition(":")
        return BSplineWindow(int(arg) if arg else 2)
    raise ValueError(f"unknown window spec: {spec!r}")


# ---------------------------------------------------------------------------
# time-frequency inner products
# ---------------------------------------------------------------------------


def _gauss_gauss(a: float, b: float) -> complex:
    return SQRT_HALF * math.exp(-math.pi * (a * a + b * b) / 2.0) * cmath.exp(-1j * math.pi * a * b)


def _box_box(g1: float, g2: float, a: float, b: float) -> complex:
    lo = max(0.0, a)
    hi = min(g1, a + g2)
    if hi <= lo:
        return 0.0 + 0.0j
    if b == 0.0:
        return complex(hi - lo)
    # integral of exp(-2 pi i b t) over [lo, hi]
    w = -2j * math.pi * b
    return (cmath.exp(w * hi) - cmath.exp(w * lo)) / w


def _atom_inner(w1: Window, w2: Window, a: float, b: float, tol: float) -> complex:
    if isinstance(w1, Gaussian) and isinstance(w2, Gaussian):
        return _gauss_gauss(a, b)
    if isinstance(w1, Box) and isinstance(w2, Box):
        return _box_box(w1.gamma, w2.gamma, a, b)
    return _quadrature_inner(w1, w2, a, b, tol)


def _quadrature_inner(w1: Window, w2: Window, a: float, b: float, tol: float) -> complex:
    cut = max(tol, 1e-14) / 100.0
    lo = max(-w1.support_halfwidth(cut), a - w2.support_halfwidth(cut))
    hi = min(w1.support_halfwidth(cut), a + w2.support_halfwidth(cut))
    if hi <= lo:
        return 0.0 + 0.0j

    def integrand_re(t):
        return (w1(np.array([t]))[0] * np.conj(w2(np.array([t - a]))[0]) * cmath.exp(-2j * math.pi * b * t)).real

    def integrand_im(t):
        return (w1(np.array([t]))[0] * np.conj(w2(np.array([t - a]))[0]) * cmath.exp(-2j * math.pi * b * t)).imag

    re, ere = quad(integrand_re, lo, hi, epsabs=tol / 4, epsrel=0, limit=400)
    im, eim = quad(integrand_im, lo, hi, epsabs=tol / 4, epsrel=0, limit=400)
    if ere + eim > tol:
        raise AccuracyError(
            f"quadrature error estimate {ere + eim:.3e} exceeds tol {tol:.3e}",
            best_estimate=complex(re, im),
        )
    return complex(re, im)


def tf_inner_product_real(w1: Window, w2: Window, a: float, b: float, tol: float = 1e-10) -> complex:
    """<w1, E_b T_a w2> on L^2(R), within tol (exact closed form where available).

    Conjugate-linear in the second argument:
    <w1, E_b T_a w2> = integral w1(t) * conj(exp(2 pi i b t) w2(t-a)) dt.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    total = 0.0 + 0.0j
    for c1, a1, b1, atom1 in w1.atoms():
        for c2, a2, b2, atom2 in w2.atoms():
            # E_b T_a E_{b2} T_{a2} = exp(-2 pi i b2 a) E_{b+b2} T_{a+a2}
            bb, aa = b + b2, a + a2
            phase2 = cmath.exp(-2j * math.pi * b2 * a)
            # <E_{b1}T_{a1}u, E_bb T_aa v> = exp(-2 pi i (bb-b1) a1) <u, E_{bb-b1}T_{aa-a1}v>
            phase1 = cmath.exp(-2j * math.pi * (bb - b1) * a1)
            total += (
                c1
                * np.conj(c2 * phase2)
                * phase1
                * _atom_inner(atom1, atom2, aa - a1, bb - b1, tol)
            )
    return complex(total)


# ---------------------------------------------------------------------------
# Janssen coefficients over the adjoint lattice
# ---------------------------------------------------------------------------


@dataclass
class CoefficientSequence:
    """Finite complex-valued map on lattice index pairs with a certified tail."""

    entries: Dict[Tuple[int, int], complex]
    lattice: RectLattice
    tail_bound: float = 0.0

    def l1_norm(self) -> float:
        return sum(abs(v) for v in self.entries.values())

    def as_sorted_items(self):
        return sorted(self.entries.items(), key=lambda kv: (max(abs(kv[0][0]), abs(kv[0][1])), kv[0]))


def envelope_ring_sum(env, spacing_x: float, spacing_y: float, radius_from: int, max_rings: int = 400) -> float:
    """Sum an envelope over lattice rings max(|k|,|l|) >= radius_from.

    Stops once a ring contributes a negligible fraction; the tail beyond the
    last summed ring is bounded by a doubling of the final ring (valid for
    the monotonically decaying envelopes used here).
    """
    total = 0.0
    last = 0.0
    for ring in range(radius_from, radius_from + max_rings):
        ring_sum = 0.0
        for k in range(-ring, ring + 1):
            for l in (-ring, ring):
                ring_sum += env(k * spacing_x, l * spacing_y)
        for l in range(-ring + 1, ring):
            for k in (-ring, ring):
                ring_sum += env(k * spacing_x, l * spacing_y)
        total += ring_sum
        last = ring_sum
        if ring_sum <= 1e-18 * max(total, 1.0):
            return total
    return total + 2.0 * last


def janssen_coefficients(
    g: Window, h: Window, lat: RectLattice, radius: int, tol: float = 1e-10
) -> CoefficientSequence:
    """The adjoint-lattice correlations c(k, l) = <h, E_{l/alpha} T_{k/beta} g>
    for |k|, |l| <= radius, with a certified l^1 bound on the omitted entries.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    entries: Dict[Tuple[int, int], complex] = {}
    for k in range(-radius, radius + 1):
        for l in range(-radius, radius + 1):
            entries[(k, l)] = tf_inner_product_real(h, g, k / lat.beta, l / lat.alpha, tol)

    def env(a, b):
        return _pair_envelope(g, h, a, b)

    tail = envelope_ring_sum(env, 1.0 / lat.beta, 1.0 / lat.alpha, radius + 1)
    return CoefficientSequence(entries=entries, lattice=lat, tail_bound=tail)


def _gaussian_pair_arrays(w1: Window, w2: Window):
    """Flattened atom-pair data (coeffs, offsets, raw b2/a1) for two windows
    whose atoms are all Gaussians; raises ValueError otherwise."""
    for w in (w1, w2):
        if not all(isinstance(base, Gaussian) for _, _, _, base in w.atoms()):
            raise ValueError("all atoms must be Gaussian")
    c1, a1, b1 = (np.array([t[i] for t in w1.atoms()]) for i in range(3))
    c2, a2, b2 = (np.array([t[i] for t in w2.atoms()]) for i in range(3))
    pair_c = (c1[:, None] * np.conj(c2)[None, :]).ravel()
    da = (a2[None, :] - a1[:, None]).ravel()
    db = (b2[None, :] - b1[:, None]).ravel()
    pa1 = np.broadcast_to(a1[:, None], (len(a1), len(a2))).ravel()
    pb2 = np.broadcast_to(b2[None, :], (len(a1), len(a2))).ravel()
    return pair_c, da, db, pa1, pb2


def gaussian_inner_table(w1: Window, w2: Window, shifts: np.ndarray, chunk: int = 128) -> np.ndarray:
    """<w1, E_b T_a w2> for each row (a, b) of `shifts`, vectorized over the
    Gaussian atom pairs (same phase conventions as tf_inner_product_real)."""
    pair_c, da, db, pa1, pb2 = _gaussian_pair_arrays(w1, w2)
    shifts = np.asarray(shifts, dtype=float).reshape(-1, 2)
    out = np.empty(len(shifts), dtype=complex)
    for start in range(0, len(shifts), chunk):
        a = shifts[start : start + chunk, 0][None, :]
        b = shifts[start : start + chunk, 1][None, :]
        A = a + da[:, None]
        B = b + db[:, None]
        angle = 2.0 * math.pi * (pb2[:, None] * a - B * pa1[:, None]) - math.pi * A * B
        vals = SQRT_HALF * np.exp(-0.5 * math.pi * (A * A + B * B) + 1j * angle)
        out[start : start + chunk] = pair_c @ vals
    return out


def gaussian_envelope_table(w1: Window, w2: Window, shifts: np.ndarray, chunk: int = 128) -> np.ndarray:
    """Vectorized _pair_envelope(w2, w1, a, b) for Gaussian-atom windows."""
    pair_c, da, db, _, _ = _gaussian_pair_arrays(w1, w2)
    abs_c = np.abs(pair_c)
    shifts = np.asarray(shifts, dtype=float).reshape(-1, 2)
    out = np.empty(len(shifts), dtype=float)
    for start in range(0, len(shifts), chunk):
        A = shifts[start : start + chunk, 0][None, :] + da[:, None]
        B = shifts[start : start + chunk, 1][None, :] + db[:, None]
        out[start : start + chunk] = SQRT_HALF * (abs_c @ np.exp(-0.5 * math.pi * (A * A + B * B)))
    return out


def ring_shifts(ring: int, spacing_x: float, spacing_y: float) -> np.ndarray:
    """The lattice points (k*sx, l*sy) with max(|k|, |l|) == ring, as rows."""
    if ring == 0:
        return np.zeros((1, 2))
    pts = []
    for k in range(-ring, ring + 1):
        for l in (-ring, ring):
            pts.append((k * spacing_x, l * spacing_y))
    for l in range(-ring + 1, ring):
        for k in (-ring, ring):
            pts.append((k * spacing_x, l * spacing_y))
    return np.array(pts)


def _pair_envelope(g: Window, h: Window, a: float, b: float) -> float:
    """Upper bound for |<h, E_b T_a g>| built from the atoms' envelopes."""
    total = 0.0
    for c1, a1, b1, w1 in h.atoms():
        for c2, a2, b2, w2 in g.atoms():
            if type(w1) is type(w2):
                total += abs(c1) * abs(c2) * w1.envelope(a + a2 - a1, b + b2 - b1)
            else:
                # Cauchy-Schwarz fallback for mixed atom types
                total += abs(c1) * abs(c2) * math.sqrt(w1.l2_norm_sq() * w2.l2_norm_sq())
    return total
