"""Time-frequency analysis on R, R x Q_p, and the adeles.

Lattices arise from scaled diagonal embeddings of Q (or Z[1/p]); characters
pair points exactly through rational phase turns; time-frequency inner
products of separable windows factor into a numeric real integral times exact
p-adic factors.  On top of this sit the Wexler-Raz duality engine, the
three-setting equivalence suite, modulation-space norms, and a Balian-Low
density scan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .exact import (
    ONE_PHASE,
    Phase,
    check_prime,
    crt_congruence_solve,
    padic_fractional_part,
    padic_valuation,
)
from .cyclotomic import EXACT_ONE, ExactComplex
from .padic import PAdicTestFunction, inner_product_padic, tf_shift_padic
from .frames import FrameBounds, NotAFrameError, canonical_dual, frame_bounds_rational
from .windows import (
    RectLattice,
    Window,
    envelope_ring_sum,
    tf_inner_product_real,
)
from .windows import _pair_envelope  # shared envelope logic

__all__ = [
    "AdelicPoint",
    "AdelicTFLattice",
    "BalianLowRow",
    "EquivalenceReport",
    "GroupSelector",
    "SeparableWindow",
    "WexlerRazReport",
    "WexlerRazRow",
    "balian_low_scan",
    "character_pair",
    "fundamental_domain_reduce",
    "lattice_embed",
    "modulation_norm",
    "promote_rational",
    "theorem_equivalence_suite",
    "tf_inner_product_group",
    "wexler_raz_check",
]

DEFAULT_PRIMES = (2, 3, 5, 7)

Rational = Union[int, Fraction]


def promote_rational(x: float, tol: float = 1e-12, limit: int = 10**4) -> Optional[Fraction]:
    """The exact small fraction within tol of x, if any.

    The denominator cap must stay well below 1/sqrt(tol): continued-fraction
    convergents of irrationals like sqrt(2) approximate to ~1/denominator^2
    and would otherwise be promoted spuriously.
    """
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    cand = Fraction(x).limit_denominator(limit)
    return cand if abs(float(cand) - x) <= tol else None


@dataclass(frozen=True)
class GroupSelector:
    """One of the three settings: R, R x Q_p, or the adeles A_Q."""

    variant: str  # "real" | "rxqp" | "adele"
    prime: Optional[int] = None

    def __post_init__(self) -> None:
        if self.variant not in ("real", "rxqp", "adele"):
            raise ValueError(f"unknown group variant {self.variant!r}")
        if self.variant == "rxqp":
            if self.prime is None:
                raise ValueError("rxqp requires a prime")
            check_prime(self.prime)
        elif self.prime is not None:
            raise ValueError(f"{self.variant} takes no prime")

    @classmethod
    def real(cls) -> "GroupSelector":
        return cls("real")

    @classmethod
    def real_x_qp(cls, p: int) -> "GroupSelector":
        return cls("rxqp", p)

    @classmethod
    def adele(cls) -> "GroupSelector":
        return cls("adele")

    @property
    def has_finite_places(self) -> bool:
        return self.variant != "real"

    def validate_index(self, q: Rational) -> Fraction:
        """Check q indexes a lattice point: any rational for adele, Z[1/p] for rxqp, Z for real."""
        q = Fraction(q)
        if self.variant == "rxqp":
            d = q.denominator
            while d % self.prime == 0:
                d //= self.prime
            if d != 1:
                raise ValueError(f"{q} is not in Z[1/{self.prime}]")
        elif self.variant == "real" and q.denominator != 1:
            raise ValueError(f"real-line lattice indices must be integers, got {q}")
        return q

    def as_dict(self) -> dict:
        d = {"variant": self.variant}
        if self.prime is not None:
            d["prime"] = self.prime
        return d


def _denominator_primes(x: Fraction) -> List[int]:
    d = x.denominator
    out = []
    f = 2
    while f * f <= d:
        if d % f == 0:
            out.append(f)
            while d % f == 0:
                d //= f
        f += 1
    if d > 1:
        out.append(d)
    return out


@dataclass(frozen=True)
class AdelicPoint:
    """A point of A_Q (or R x Q_p): a real coordinate plus local coordinates.

    Primes absent from `finite` carry the coordinate `tail` (an element of Z_p
    at every absent prime).  Diagonal embeddings of a rational q set tail = q,
    which is what makes the annihilator pairing exact; a point with tail = 0
    matches the convention that unlisted primes sit at 0 in Z_p.
    """

    real: Union[Fraction, float]
    finite: Mapping[int, Fraction] = field(default_factory=dict)
    tail: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        clean = {}
        for p, v in sorted(dict(self.finite).items()):
            check_prime(p)
            clean[p] = Fraction(v)
        object.__setattr__(self, "finite", clean)
        object.__setattr__(self, "tail", Fraction(self.tail))

    @property
    def real_float(self) -> float:
        return float(self.real)

    @property
    def real_exact(self) -> Optional[Fraction]:
        return self.real if isinstance(self.real, (int, Fraction)) else None

    def coordinate(self, p: int) -> Fraction:
        return self.finite.get(p, self.tail)

    def active_primes(self) -> List[int]:
        ps = set(self.finite)
        ps.update(_denominator_primes(self.tail))
        return sorted(ps)

    def __add__(self, other: "AdelicPoint") -> "AdelicPoint":
        if isinstance(self.real, float) or isinstance(other.real, float):
            real: Union[Fraction, float] = self.real_float + other.real_float
        else:
            real = self.real + other.real
        primes = set(self.finite) | set(other.finite)
        finite = {p: self.coordinate(p) + other.coordinate(p) for p in primes}
        return AdelicPoint(real, finite, self.tail + other.tail)

    def __neg__(self) -> "AdelicPoint":
        real = -self.real if isinstance(self.real, (int, Fraction)) else -self.real_float
        return AdelicPoint(real, {p: -v for p, v in self.finite.items()}, -self.tail)

    def __sub__(self, other: "AdelicPoint") -> "AdelicPoint":
        return self + (-other)

    def as_dict(self) -> dict:
        return {
            "real": str(self.real) if isinstance(self.real, (int, Fraction)) else self.real,
            "finite": {str(p): str(v) for p, v in sorted(self.finite.items())},
            "tail": str(self.tail),
        }


def lattice_embed(group: GroupSelector, alpha: Union[float, Rational], q: Rational) -> AdelicPoint:
    """phi_alpha(q) = (alpha*q, (q)_p): the scaled diagonal embedding of q."""
    q = group.validate_index(q)
    alpha_exact = promote_rational(alpha) if not isinstance(alpha, (int, Fraction)) else Fraction(alpha)
    real: Union[Fraction, float] = alpha_exact * q if alpha_exact is not None else float(alpha) * float(q)
    if not group.has_finite_places:
        return AdelicPoint(real)
    finite = {p: q for p in _denominator_primes(q)}
    if group.variant == "rxqp":
        finite = {group.prime: q}
        return AdelicPoint(real, finite, Fraction(0))
    return AdelicPoint(real, finite, q)


def character_pair(x: AdelicPoint, y: AdelicPoint, group: GroupSelector) -> Phase:
    """omega_y(x) = e^{2 pi i x_oo y_oo} * prod_p e^{-2 pi i {x_p y_p}_p}, exactly
    in the finite part (and in the real part when both coordinates are exact).
    """
    turns = Fraction(0)
    radians = 0.0
    xe, ye = x.real_exact, y.real_exact
    if xe is not None and ye is not None:
        turns += xe * ye
    else:
        radians += 2.0 * math.pi * x.real_float * y.real_float
    if group.has_finite_places:
        primes = set(x.active_primes()) | set(y.active_primes())
        if group.variant == "rxqp":
            primes &= {group.prime}
        for p in sorted(primes):
            turns -= padic_fractional_part(x.coordinate(p) * y.coordinate(p), p)
    return Phase(turns=turns, radians=radians)


def fundamental_domain_reduce(
    x: AdelicPoint, alpha: Union[float, Rational], group: GroupSelector
) -> Tuple[AdelicPoint, Fraction]:
    """The unique (b, q) with x = b + phi_alpha(q) and b in [0,|alpha|) x prod Z_p."""
    alpha_f = abs(float(alpha))
    if alpha_f == 0:
        raise ValueError("alpha must be nonzero")
    residues = {p: padic_fractional_part(x.coordinate(p), p) for p in x.active_primes()}
    residues = {p: v for p, v in residues.items() if v != 0}
    q0 = crt_congruence_solve(residues) if residues else Fraction(0)
    if group.variant == "rxqp":
        group.validate_index(q0)
    n = math.floor((x.real_float - alpha_f * float(q0)) / alpha_f)
    q = q0 + n
    b = x - lattice_embed(group, alpha, q)
    return b, q


# ---------------------------------------------------------------------------
# separable windows and factorized inner products
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SeparableWindow:
    """real_window tensor a finite set of local parts; absent primes are 1_{Z_p}."""

    real_window: Window
    local_parts: Mapping[int, PAdicTestFunction] = field(default_factory=dict)
    group: GroupSelector = field(default_factory=GroupSelector.adele)

    def __post_init__(self) -> None:
        parts = dict(self.local_parts)
        for p, f in parts.items():
            check_prime(p)
            if f.p != p:
                raise ValueError(f"local part at {p} lives on Q_{f.p}")
        if self.group.variant == "real" and parts:
            raise ValueError("real-line windows take no local parts")
        if self.group.variant == "rxqp" and any(p != self.group.prime for p in parts):
            raise ValueError("R x Q_p windows carry a single local part")
        object.__setattr__(self, "local_parts", parts)

    def local_part(self, p: int) -> PAdicTestFunction:
        return self.local_parts.get(p, PAdicTestFunction.unit(p))

    def has_default_part(self, p: int) -> bool:
        return p not in self.local_parts or self.local_parts[p].is_unit_indicator()

    def active_primes(self) -> List[int]:
        return sorted(p for p in self.local_parts if not self.has_default_part(p))


@dataclass(frozen=True)
class AdelicTFLattice:
    """The lattice phi_alpha(Q) x phi_beta(Q) (resp. psi for R x Q_p, or alpha Z x beta Z)."""

    group: GroupSelector
    alpha: float
    beta: float
    alpha_exact: Optional[Fraction] = None
    beta_exact: Optional[Fraction] = None

    def __post_init__(self) -> None:
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError("lattice parameters must be positive")
        if self.alpha_exact is None:
            object.__setattr__(self, "alpha_exact", promote_rational(self.alpha))
        if self.beta_exact is None:
            object.__setattr__(self, "beta_exact", promote_rational(self.beta))

    @classmethod
    def create(cls, group: GroupSelector, alpha, beta) -> "AdelicTFLattice":
        ae = Fraction(alpha) if isinstance(alpha, (int, Fraction)) else promote_rational(alpha)
        be = Fraction(beta) if isinstance(beta, (int, Fraction)) else promote_rational(beta)
        return cls(group, float(alpha), float(beta), ae, be)

    def adjoint(self) -> "AdelicTFLattice":
        ia = 1 / self.beta_exact if self.beta_exact else None
        ib = 1 / self.alpha_exact if self.alpha_exact else None
        return AdelicTFLattice(self.group, 1.0 / self.beta, 1.0 / self.alpha, ia, ib)

    @property
    def rect(self) -> RectLattice:
        return RectLattice(self.alpha, self.beta)

    def as_dict(self) -> dict:
        return {
            "group": self.group.as_dict(),
            "alpha": self.alpha,
            "beta": self.beta,
            "alpha_exact": str(self.alpha_exact) if self.alpha_exact is not None else None,
            "beta_exact": str(self.beta_exact) if self.beta_exact is not None else None,
        }


def padic_factor(
    f: SeparableWindow, g: SeparableWindow, q: Fraction, r: Fraction, group: GroupSelector
) -> ExactComplex:
    """prod_p <f_p, E_r T_q g_p>, evaluated exactly over the primes that matter."""
    if not group.has_finite_places:
        return EXACT_ONE
    primes = set(_denominator_primes(q)) | set(_denominator_primes(r))
    primes |= set(f.active_primes()) | set(g.active_primes())
    if group.variant == "rxqp":
        primes &= {group.prime}
    total = EXACT_ONE
    for p in sorted(primes):
        if f.has_default_part(p) and g.has_default_part(p):
            # <1_{Z_p}, E_r T_q 1_{Z_p}> = 1 if q, r in Z_p else 0
            if padic_valuation(q, p) < 0 or padic_valuation(r, p) < 0:
                return ExactComplex.from_rational(0)
            continue
        factor = inner_product_padic(f.local_part(p), tf_shift_padic(g.local_part(p), q, r))
        if factor.is_zero():
            return ExactComplex.from_rational(0)
        total = total * factor
    return total


def tf_inner_product_group(
    f: SeparableWindow,
    g: SeparableWindow,
    lam: Tuple[Rational, Rational],
    lat: AdelicTFLattice,
    tol: float = 1e-10,
) -> complex:
    """<f, pi(lambda_{q,r}) g> = <f_R, E_{beta r} T_{alpha q} g_R> * prod_p <f_p, E_r T_q g_p>."""
    q, r = Fraction(lam[0]), Fraction(lam[1])
    lat.group.validate_index(q)
    lat.group.validate_index(r)
    p_factor = padic_factor(f, g, q, r, lat.group)
    if p_factor.is_zero():
        return 0.0 + 0.0j
    real_factor = tf_inner_product_real(
        f.real_window, g.real_window, lat.alpha * float(q), lat.beta * float(r), tol
    )
    return real_factor * p_factor.to_complex()


# ---------------------------------------------------------------------------
# Wexler-Raz engine
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WexlerRazRow:
    q: Fraction
    r: Fraction
    expected: complex
    computed: complex
    residual: float
    exact_zero: bool

    def as_dict(self) -> dict:
        return {
            "q": str(self.q),
            "r": str(self.r),
            "expected_re": self.expected.real,
            "expected_im": self.expected.imag,
            "computed_re": self.computed.real,
            "computed_im": self.computed.imag,
            "residual": self.residual,
            "exact_zero": self.exact_zero,
        }


@dataclass(frozen=True)
class WexlerRazReport:
    group: GroupSelector
    alpha: float
    beta: float
    trunc_denom_exp: int
    trunc_height: int
    rows: Tuple[WexlerRazRow, ...]
    max_residual: float
    tail_bound: float
    verdict: str  # "dual" | "not dual"
    convention: str = "expected = s(Lambda) * delta = alpha*beta * delta"

    def integer_rows(self) -> List[WexlerRazRow]:
        return [w for w in self.rows if w.q.denominator == 1 and w.r.denominator == 1]

    def as_dict(self) -> dict:
        return {
            "group": self.group.as_dict(),
            "alpha": self.alpha,
            "beta": self.beta,
            "trunc_denom_exp": self.trunc_denom_exp,
            "trunc_height": self.trunc_height,
            "rows": [w.as_dict() for w in self.rows],
            "max_residual": self.max_residual,
            "tail_bound": self.tail_bound,
            "verdict": self.verdict,
            "convention": self.convention,
        }


def _row_sort_key(qr: Tuple[Fraction, Fraction]):
    q, r = qr
    return (max(abs(q), abs(r)), q, r)


def _adjoint_indices(
    group: GroupSelector,
    windows: Sequence[SeparableWindow],
    height: int,
    denom_exp: int,
    prime_bound: Sequence[int] = DEFAULT_PRIMES,
) -> List[Tuple[Fraction, Fraction]]:
    """Integer rows up to the height bound, plus a deterministic sample of
    non-integer rows witnessing exact vanishing (or exercising non-default
    local parts) at each active prime.
    """
    idx = {
        (Fraction(k), Fraction(l))
        for k in range(-height, height + 1)
        for l in range(-height, height + 1)
    }
    if group.has_finite_places:
        if group.variant == "rxqp":
            primes = [group.prime]
        else:
            primes = sorted(set(prime_bound) | {p for w in windows for p in w.active_primes()})
        for p in primes:
            for e in range(1, denom_exp + 1):
                s = Fraction(1, p**e)
                if s > height:
                    continue
                for cand in ((s, Fraction(0)), (Fraction(0), s), (s, s), (-s, Fraction(1))):
                    idx.add(cand)
    return sorted(idx, key=_row_sort_key)


def wexler_raz_check(
    g: SeparableWindow,
    h: SeparableWindow,
    lat: AdelicTFLattice,
    trunc: Tuple[int, int] = (3, 5),
    tol: float = 1e-8,
) -> WexlerRazReport:
    """Biorthogonality over the adjoint lattice: dual pair iff
    <h, pi(lambda°) g> = alpha*beta*delta for all adjoint lattice points.
    """
    denom_exp, height = trunc
    if denom_exp < 0 or height < 0:
        raise ValueError("truncation bounds must be nonnegative")
    adjoint = lat.adjoint()
    s_lambda = lat.alpha * lat.beta
    rows = []
    for q, r in _adjoint_indices(lat.group, (g, h), height, denom_exp):
        pf = padic_factor(h, g, q, r, lat.group)
        exact_zero = pf.is_zero()
        if exact_zero:
            computed = 0.0 + 0.0j
        else:
            computed = tf_inner_product_real(
                h.real_window,
                g.real_window,
                adjoint.alpha * float(q),
                adjoint.beta * float(r),
                tol / 10.0,
            ) * pf.to_complex()
        expected = complex(s_lambda) if (q, r) == (0, 0) else 0.0 + 0.0j
        rows.append(
            WexlerRazRow(q, r, expected, computed, abs(computed - expected), exact_zero)
        )
    max_residual = max(w.residual for w in rows) if rows else 0.0
    tail = envelope_ring_sum(
        lambda a, b: _pair_envelope(g.real_window, h.real_window, a, b),
        adjoint.alpha,
        adjoint.beta,
        height + 1,
    )
    verdict = "dual" if max_residual < tol else "not dual"
    return WexlerRazReport(
        group=lat.group,
        alpha=lat.alpha,
        beta=lat.beta,
        trunc_denom_exp=denom_exp,
        trunc_height=height,
        rows=tuple(rows),
        max_residual=max_residual,
        tail_bound=tail,
        verdict=verdict,
    )


@dataclass(frozen=True)
class EquivalenceReport:
    """Three-setting Wexler-Raz comparison (R, R x Q_p, adeles)."""

    reports: Tuple[WexlerRazReport, WexlerRazReport, WexlerRazReport]
    verdicts_coincide: bool
    nonint_rows_exact_zero: bool
    integer_row_max_disagreement: float
    verdict: str

    def as_dict(self) -> dict:
        return {
            "settings": [r.as_dict() for r in self.reports],
            "verdicts_coincide": self.verdicts_coincide,
            "nonint_rows_exact_zero": self.nonint_rows_exact_zero,
            "integer_row_max_disagreement": self.integer_row_max_disagreement,
            "verdict": self.verdict,
        }


def theorem_equivalence_suite(
    g_R: Window,
    h_R: Window,
    alpha: float,
    beta: float,
    p: int = 2,
    trunc: Tuple[int, int] = (3, 5),
    tol: float = 1e-8,
) -> EquivalenceReport:
    """Duality is equivalent across R, R x Q_p and A_Q for separable extensions
    with default local parts: run all three and cross-check row by row.
    """
    reports = []
    for group in (GroupSelector.real(), GroupSelector.real_x_qp(p), GroupSelector.adele()):
        lat = AdelicTFLattice.create(group, alpha, beta)
        g = SeparableWindow(g_R, {}, group)
        h = SeparableWindow(h_R, {}, group)
        reports.append(wexler_raz_check(g, h, lat, trunc, tol))
    real_rows = {(w.q, w.r): w.computed for w in reports[0].rows}
    nonint_ok = True
    disagreement = 0.0
    for rep in reports[1:]:
        for w in rep.rows:
            if w.q.denominator == 1 and w.r.denominator == 1:
                disagreement = max(disagreement, abs(w.computed - real_rows[(w.q, w.r)]))
            elif not w.exact_zero:
                nonint_ok = False
    coincide = len({rep.verdict for rep in reports}) == 1
    if not (coincide and nonint_ok and disagreement <= 1e-10):
        verdict = "equivalence-violated"
    else:
        verdict = reports[0].verdict
    return EquivalenceReport(
        reports=tuple(reports),
        verdicts_coincide=coincide,
        nonint_rows_exact_zero=nonint_ok,
        integer_row_max_disagreement=disagreement,
        verdict=verdict,
    )


# ---------------------------------------------------------------------------
# modulation norm and Balian-Low scan
# ---------------------------------------------------------------------------


def modulation_norm(
    f: SeparableWindow,
    g: SeparableWindow,
    lat: AdelicTFLattice,
    s: float = 2.0,
    t: float = 2.0,
    trunc: Tuple[int, int] = (3, 5),
    tol: float = 1e-10,
) -> float:
    """Truncated mixed-norm l^{s,t} of the Gabor coefficient table
    |<f, pi(lambda_{q,r}) g>|: inner index q at exponent s, outer index r at t;
    max replaces the sum at infinity.
    """
    if not (s >= 1 and t >= 1):
        raise ValueError("exponents must lie in [1, oo]")
    denom_exp, height = trunc
    indices = _adjoint_indices(lat.group, (f, g), height, denom_exp)
    by_r: Dict[Fraction, List[float]] = {}
    for q, r in indices:
        mag = abs(tf_inner_product_group(f, g, (q, r), lat, tol))
        by_r.setdefault(r, []).append(mag)
    inner_vals = []
    for r in sorted(by_r):
        col = by_r[r]
        inner_vals.append(max(col) if math.isinf(s) else sum(v**s for v in col) ** (1.0 / s))
    if math.isinf(t):
        return max(inner_vals) if inner_vals else 0.0
    return sum(v**t for v in inner_vals) ** (1.0 / t)


@dataclass(frozen=True)
class BalianLowRow:
    density: float
    lower_bound: float
    refined_lower_bound: float
    dual_origin_residual: Optional[float]
    note: str

    def as_dict(self) -> dict:
        return {
            "density": self.density,
            "lower_bound": self.lower_bound,
            "refined_lower_bound": self.refined_lower_bound,
            "dual_origin_residual": self.dual_origin_residual,
            "note": self.note,
        }


def balian_low_scan(
    g_R: Window,
    densities: Sequence[float],
    group: GroupSelector = GroupSelector.adele(),
    trunc: Tuple[int, int] = (3, 5),
    grid_density: int = 32,
    tol: float = 1e-8,
    compute_duals: bool = True,
) -> List[BalianLowRow]:
    """Frame-bound degradation as the lattice density alpha*beta approaches 1.

    For each density the lattice is alpha = beta = sqrt(density); records the
    lower frame-bound estimate at two grid refinements and, when a dual can be
    computed, the Wexler-Raz origin residual of that dual.
    """
    rows = []
    for dens in densities:
        frac = promote_rational(dens, tol=1e-9, limit=256)
        if frac is None or not (0 < dens <= 1):
            rows.append(BalianLowRow(dens, math.nan, math.nan, None, "skipped: unsupported density"))
            continue
        side = math.sqrt(dens)
        rect = RectLattice(side, side)
        fb = frame_bounds_rational(g_R, rect, grid_density)
        fb2 = frame_bounds_rational(g_R, rect, 2 * grid_density)
        residual: Optional[float] = None
        note = ""
        contraction = (fb2.upper - fb2.lower) / (fb2.upper + fb2.lower) if fb2.upper > 0 else 1.0
        if fb2.lower <= 0:
            note = "not-a-frame"
        elif not compute_duals:
            note = "dual skipped: disabled"
        elif contraction > 0.9:
            note = "dual skipped: ill-conditioned frame"
        else:
            try:
                h = canonical_dual(g_R, rect, "grid", tol)
                origin = tf_inner_product_real(h, g_R, 0.0, 0.0, tol / 10.0)
                residual = abs(origin - dens)
                note = "dual computed"
            except NotAFrameError:
                note = "not-a-frame"
        rows.append(BalianLowRow(dens, fb.lower, fb2.lower, residual, note))
    return rows
