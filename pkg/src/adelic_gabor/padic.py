"""Exact calculus of locally constant, compactly supported functions on Q_p.

A test function is a finite sum of terms

    coeff * exp(-2*pi*i*{freq*(t - center)}_p) * 1_{center + p^level Z_p}(t)

stored with pairwise-disjoint balls, canonical ball centers, and frequencies
reduced modulo the dual lattice of each ball.  The minus sign on the p-adic
frequency follows the character convention used on the product groups and
the adeles.  All coefficients are exact cyclotomic scalars, so pointwise
values, shifts, integrals and inner products are computed without rounding.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Tuple

from .cyclotomic import EXACT_ZERO, ExactComplex
from .exact import (
    PADIC_INFINITY,
    Phase,
    PrueferElement,
    check_prime,
    padic_fractional_part,
    padic_valuation,
)

__all__ = [
    "PAdicBall",
    "PAdicTestFunction",
    "S0ZpSeries",
    "char_ball_integral",
    "inner_product_padic",
    "s0_norm",
    "s0_norm_qp",
    "tf_shift_padic",
]

FractionLike = Fraction


def _canonical_center(c: Fraction, p: int, level: int) -> Fraction:
    """Digits of c strictly below position `level`: the canonical coset rep."""
    pk = Fraction(p) ** level
    return pk * padic_fractional_part(Fraction(c) / pk, p)


def _reduce_freq(r: Fraction, p: int, level: int) -> Fraction:
    """Canonical frequency on a level-k ball: the p-primary digits of r below
    position -level.  Frequencies differing by something of valuation >= -level
    (or with no p in the denominator at all) act identically on the ball."""
    step = Fraction(p) ** (-level)
    return step * padic_fractional_part(Fraction(r) / step, p)


@dataclass(frozen=True)
class PAdicBall:
    """The coset center + p^level * Z_p; measure p^{-level}."""

    p: int
    center: Fraction
    level: int

    def __post_init__(self) -> None:
        check_prime(self.p)
        object.__setattr__(self, "center", _canonical_center(Fraction(self.center), self.p, self.level))

    @classmethod
    def unit(cls, p: int) -> "PAdicBall":
        return cls(p, Fraction(0), 0)

    @property
    def measure(self) -> Fraction:
        return Fraction(1, self.p**self.level) if self.level >= 0 else Fraction(self.p ** (-self.level))

    def contains_point(self, t: Fraction) -> bool:
        v = padic_valuation(Fraction(t) - self.center, self.p)
        return v is PADIC_INFINITY or v >= self.level

    def contains_ball(self, other: "PAdicBall") -> bool:
        return self.level <= other.level and self.contains_point(other.center)

    def children(self) -> List["PAdicBall"]:
        """The p disjoint sub-balls one level down."""
        pk = Fraction(self.p) ** self.level
        return [PAdicBall(self.p, self.center + j * pk, self.level + 1) for j in range(self.p)]

    def as_dict(self) -> dict:
        return {"center": str(self.center), "level": self.level}


def char_ball_integral(r, ball: PAdicBall) -> ExactComplex:
    """Exact integral of exp(2*pi*i*{r t}_p) over the ball.

    Equals measure * exp(2*pi*i*{r*center}_p) when |r|_p <= p^level,
    and 0 otherwise.
    """
    r = Fraction(r)
    v = padic_valuation(r, ball.p)
    if v is not PADIC_INFINITY and v < -ball.level:
        return EXACT_ZERO
    phase = Phase(padic_fractional_part(r * ball.center, ball.p))
    return ExactComplex.from_phase(phase, ball.measure)


# term storage: ball -> {reduced freq -> ExactComplex coeff}
_TermMap = Dict[PAdicBall, Dict[Fraction, ExactComplex]]


class PAdicTestFunction:
    """Finite linear combination of character-times-ball-indicator terms."""

    __slots__ = ("p", "_terms")

    def __init__(self, p: int, terms: _TermMap | None = None):
        check_prime(p)
        self.p = p
        self._terms: _TermMap = {}
        if terms:
            for ball, freqs in terms.items():
                for freq, coeff in freqs.items():
                    self._insert(ball, Fraction(freq), coeff)
            self._prune()

    # ---- constructors ---------------------------------------------------

    @classmethod
    def indicator(cls, ball: PAdicBall) -> "PAdicTestFunction":
        return cls(ball.p, {ball: {Fraction(0): ExactComplex.from_rational(1)}})

    @classmethod
    def unit(cls, p: int) -> "PAdicTestFunction":
        """The indicator of Z_p, the default local window."""
        return cls.indicator(PAdicBall.unit(p))

    @classmethod
    def from_absolute_terms(
        cls, p: int, terms: Iterable[Tuple[ExactComplex, Fraction, PAdicBall]]
    ) -> "PAdicTestFunction":
        """Build from terms coeff * exp(-2*pi*i*{freq*t}_p) * 1_ball.

        The stored coefficient absorbs the phase at the ball center so that
        internal terms are center-relative.
        """
        out = cls(p)
        for coeff, freq, ball in terms:
            freq = Fraction(freq)
            phase = Phase(-padic_fractional_part(freq * ball.center, p))
            out._insert(ball, freq, coeff * phase)
        out._prune()
        return out

    # ---- canonical insertion --------------------------------------------

    def _insert(self, ball: PAdicBall, freq: Fraction, coeff: ExactComplex) -> None:
        if coeff.is_zero():
            return
        freq = _reduce_freq(freq, self.p, ball.level)
        for existing in list(self._terms):
            if existing == ball:
                break
            if existing.contains_ball(ball):
                # split the existing coarser ball and retry
                freqs = self._terms.pop(existing)
                for child in existing.children():
                    delta = child.center - existing.center
                    for f, c in freqs.items():
                        phase = Phase(-padic_fractional_part(f * delta, self.p))
                        self._insert(child, f, c * phase)
                self._insert(ball, freq, coeff)
                return
            if ball.contains_ball(existing):
                # distribute the new term over p children of its ball
                for child in ball.children():
                    delta = child.center - ball.center
                    phase = Phase(-padic_fractional_part(freq * delta, self.p))
                    self._insert(child, freq, coeff * phase)
                return
        slot = self._terms.setdefault(ball, {})
        slot[freq] = slot.get(freq, EXACT_ZERO) + coeff

    def _prune(self) -> None:
        for ball in list(self._terms):
            freqs = self._terms[ball]
            for f in list(freqs):
                if freqs[f].is_zero():
                    del freqs[f]
            if not freqs:
                del self._terms[ball]

    # ---- queries ---------------------------------------------------------

    @property
    def terms(self) -> _TermMap:
        return {b: dict(f) for b, f in self._terms.items()}

    def is_zero(self) -> bool:
        return not self._terms

    def is_unit_indicator(self) -> bool:
        if len(self._terms) != 1:
            return False
        (ball, freqs), = self._terms.items()
        return (
            ball == PAdicBall.unit(self.p)
            and set(freqs) == {Fraction(0)}
            and freqs[Fraction(0)] == ExactComplex.from_rational(1)
        )

    def evaluate(self, t) -> ExactComplex:
        """Exact pointwise value at a rational point t."""
        t = Fraction(t)
        total = EXACT_ZERO
        for ball, freqs in self._terms.items():
            if not ball.contains_point(t):
                continue
            for f, c in freqs.items():
                phase = Phase(-padic_fractional_part(f * (t - ball.center), self.p))
                total = total + c * phase
        return total

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PAdicTestFunction) or other.p != self.p:
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        raise TypeError("unhashable")

    # ---- linear structure --------------------------------------------------

    def __add__(self, other: "PAdicTestFunction") -> "PAdicTestFunction":
        if other.p != self.p:
            raise ValueError("prime mismatch")
        out = PAdicTestFunction(self.p, self._terms)
        for ball, freqs in other._terms.items():
            for f, c in freqs.items():
                out._insert(ball, f, c)
        out._prune()
        return out

    def __sub__(self, other: "PAdicTestFunction") -> "PAdicTestFunction":
        return self + other.scale(ExactComplex.from_rational(-1))

    def scale(self, factor: ExactComplex) -> "PAdicTestFunction":
        if isinstance(factor, Phase):
            factor = ExactComplex.from_phase(factor)
        out = PAdicTestFunction(self.p)
        for ball, freqs in self._terms.items():
            for f, c in freqs.items():
                out._insert(ball, f, c * factor)
        out._prune()
        return out

    # ---- serialization -----------------------------------------------------

    def as_dict(self) -> dict:
        items = []
        for ball in sorted(self._terms, key=lambda b: (b.level, b.center)):
            for f in sorted(self._terms[ball]):
                c = self._terms[ball][f].to_complex()
                items.append(
                    {
                        "coeff": {"re": c.real, "im": c.imag},
                        "freq": str(f),
                        "ball": ball.as_dict(),
                    }
                )
        return {"p": self.p, "terms": items}


def tf_shift_padic(f: PAdicTestFunction, x, r) -> PAdicTestFunction:
    """The time-frequency shift E_r T_x f with the minus-sign modulation:

        (E_r T_x f)(t) = exp(-2*pi*i*{r t}_p) * f(t - x).
    """
    x, r = Fraction(x), Fraction(r)
    p = f.p
    out = PAdicTestFunction(p)
    for ball, freqs in f._terms.items():
        shifted = PAdicBall(p, ball.center + x, ball.level)
        # the canonical center may differ from center+x by an element of the ball
        delta = (ball.center + x) - shifted.center
        mod_phase = Phase(-padic_fractional_part(r * shifted.center, p))
        for freq, coeff in freqs.items():
            phase = Phase(padic_fractional_part(freq * delta, p)) * mod_phase
            out._insert(shifted, freq + r, coeff * phase)
    out._prune()
    return out


def inner_product_padic(f: PAdicTestFunction, g: PAdicTestFunction) -> ExactComplex:
    """Exact L^2 inner product <f, g> = integral of f * conj(g), linear in f."""
    if f.p != g.p:
        raise ValueError("prime mismatch")
    p = f.p
    total = EXACT_ZERO
    for bf, freqs_f in f._terms.items():
        for bg, freqs_g in g._terms.items():
            if bf.contains_ball(bg):
                small, large, large_freqs, small_is_g = bg, bf, freqs_f, True
            elif bg.contains_ball(bf):
                small, large, large_freqs, small_is_g = bf, bg, freqs_g, False
            else:
                continue
            delta = small.center - large.center
            for rf, cf in freqs_f.items():
                for rg, cg in freqs_g.items():
                    # restrict the coarser term to the smaller ball
                    if small_is_g:
                        cf_local = cf * Phase(-padic_fractional_part(rf * delta, p))
                        cg_local = cg
                    else:
                        cf_local = cf
                        cg_local = cg * Phase(-padic_fractional_part(rg * delta, p))
                    diff = rf - rg
                    v = padic_valuation(diff, p)
                    if v is not PADIC_INFINITY and v < -small.level:
                        continue
                    total = total + cf_local * cg_local.conjugate() * small.measure
    return total


@dataclass(frozen=True)
class S0ZpSeries:
    """A function on Z_p with finite Fourier expansion over p-power roots of unity."""

    p: int
    coefficients: Mapping[PrueferElement, complex]

    def __post_init__(self) -> None:
        check_prime(self.p)
        for z in self.coefficients:
            if z.p != self.p:
                raise ValueError("Pruefer element prime mismatch")

    def evaluate(self, x) -> complex:
        from .exact import pruefer_char_eval

        return sum(
            complex(c) * pruefer_char_eval(z, x).to_complex()
            for z, c in self.coefficients.items()
        )


def s0_norm(series: S0ZpSeries) -> float:
    """The l^1 norm of the Fourier coefficients."""
    return float(sum(abs(complex(c)) for c in series.coefficients.values()))


def s0_norm_qp(family: Mapping[Fraction, S0ZpSeries]) -> float:
    """S0 norm on Q_p for a function given coset-by-coset: sum of coset norms.

    Keys are the canonical coset representatives in [0,1) of Q_p / Z_p.
    """
    for rep in family:
        r = Fraction(rep)
        if not (0 <= r < 1):
            raise ValueError(f"coset representative not canonical: {rep}")
    return float(sum(s0_norm(series) for series in family.values()))
