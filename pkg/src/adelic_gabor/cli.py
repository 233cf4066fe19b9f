"""Command-line interface: deterministic report generation for the library.

Exit codes: 0 verdict-success, 1 honest verdict-failure, 2 usage or
configuration error, 3 accuracy error (a computation could not certify the
requested tolerance).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from .adelic import (
    AdelicPoint,
    AdelicTFLattice,
    GroupSelector,
    SeparableWindow,
    balian_low_scan,
    character_pair,
    fundamental_domain_reduce,
    lattice_embed,
    modulation_norm,
    promote_rational,
    theorem_equivalence_suite,
    wexler_raz_check,
)
from .frames import NotAFrameError, canonical_dual, frame_bounds_rational
from .module_algebra import module_axiom_check, projection_check
from .reports import Report, RunConfig, emit
from .windows import AccuracyError, FiniteCombo, RectLattice, Window, parse_window

EXIT_SUCCESS = 0
EXIT_VERDICT_FAILURE = 1
EXIT_USAGE = 2
EXIT_ACCURACY = 3

_SUCCESS_VERDICTS = {
    "dual",
    "projection",
    "axiom-holds",
    "degradation-confirmed",
    "reduced",
    "computed",
}

CONVENTIONS = {
    "character": "omega_y(x) = e^{2 pi i x_oo y_oo} prod_p e^{-2 pi i {x_p y_p}_p}",
    "expected": "Wexler-Raz expected value uses s(Lambda) = alpha*beta",
    "shift": "pi(q, r) = E_{beta r} T_{alpha q}; inner products conjugate-linear in the second slot",
}


class ConfigError(ValueError):
    """Invalid CLI/config input (maps to exit code 2)."""


def _parse_rational(text: str) -> Tuple[Union[Fraction, float], str, Optional[str]]:
    """Parse "a/b" exactly or a decimal (promoted to a nearby small rational
    when within 1e-12); returns (value, echo string, promotion annotation)."""
    text = text.strip()
    try:
        if "/" in text:
            return Fraction(text), text, None
        as_float = float(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"cannot parse rational {text!r}: {exc}") from exc
    frac = promote_rational(as_float)
    if frac is not None and float(frac) != as_float:
        return frac, text, f"{text} promoted to the exact rational {frac} (within 1e-12)"
    if frac is not None:
        return frac, text, None
    return as_float, text, None


def _positive(value: Union[Fraction, float], name: str) -> None:
    if not (float(value) > 0):
        raise ConfigError(f"{name} must be positive")


def _build_group(args: argparse.Namespace) -> GroupSelector:
    if args.group == "real":
        return GroupSelector.real()
    if args.group == "rxqp":
        return GroupSelector.real_x_qp(args.prime)
    if args.group == "adele":
        return GroupSelector.adele()
    raise ConfigError(f"unknown group {args.group!r}")


def _load_window_file(path: str) -> Window:
    """A window stored as JSON: {"base": SPEC, "terms": [{"re", "im", "a", "b"}]}."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        base = parse_window(doc["base"])
        terms = tuple(
            (complex(t["re"], t.get("im", 0.0)), float(t["a"]), float(t["b"]), base)
            for t in doc["terms"]
        )
    except (OSError, KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot load window file {path!r}: {exc}") from exc
    return FiniteCombo(terms)


def _resolve_dual(args: argparse.Namespace, g_R: Window, rect: RectLattice) -> Window:
    if args.dual == "self":
        return g_R
    if args.dual == "auto":
        return canonical_dual(g_R, rect, "grid", min(args.tol, 1e-8))
    if args.dual == "file":
        if not args.dual_file:
            raise ConfigError("--dual file requires --dual-file PATH")
        return _load_window_file(args.dual_file)
    raise ConfigError(f"unknown dual mode {args.dual!r}")


def _run_config(args: argparse.Namespace, **extras: Any) -> RunConfig:
    return RunConfig(
        subcommand=args.subcommand,
        group=args.group,
        prime=args.prime,
        alpha=args.alpha,
        beta=args.beta,
        window=args.window,
        dual=args.dual,
        trunc_height=args.trunc_height,
        trunc_denom_exp=args.trunc_denom_exp,
        tol=args.tol,
        output=args.output,
        seed=args.seed,
        extras=extras,
    )


def _cmd_wr_check(args: argparse.Namespace) -> Report:
    group = _build_group(args)
    alpha, _, note_a = _parse_rational(args.alpha)
    beta, _, note_b = _parse_rational(args.beta)
    _positive(alpha, "alpha")
    _positive(beta, "beta")
    g_R = parse_window(args.window)
    lat = AdelicTFLattice.create(group, alpha, beta)
    annotations = [n for n in (note_a, note_b) if n]
    try:
        h_R = _resolve_dual(args, g_R, lat.rect)
    except NotAFrameError as exc:
        return Report(
            config=_run_config(args),
            result={"error": str(exc)},
            verdict="not-a-frame",
            conventions=CONVENTIONS,
            annotations=annotations,
        )
    rep = wexler_raz_check(
        SeparableWindow(g_R, {}, group),
        SeparableWindow(h_R, {}, group),
        lat,
        (args.trunc_denom_exp, args.trunc_height),
        args.tol,
    )
    return Report(
        config=_run_config(args),
        result=rep.as_dict(),
        verdict=rep.verdict,
        conventions=CONVENTIONS,
        annotations=annotations,
    )


def _cmd_equivalence(args: argparse.Namespace) -> Report:
    alpha, _, note_a = _parse_rational(args.alpha)
    beta, _, note_b = _parse_rational(args.beta)
    _positive(alpha, "alpha")
    _positive(beta, "beta")
    g_R = parse_window(args.window)
    rect = RectLattice(float(alpha), float(beta))
    try:
        h_R = _resolve_dual(args, g_R, rect)
    except NotAFrameError as exc:
        return Report(
            config=_run_config(args),
            result={"error": str(exc)},
            verdict="not-a-frame",
            conventions=CONVENTIONS,
        )
    rep = theorem_equivalence_suite(
        g_R, h_R, float(alpha), float(beta), args.prime,
        (args.trunc_denom_exp, args.trunc_height), args.tol,
    )
    return Report(
        config=_run_config(args),
        result=rep.as_dict(),
        verdict=rep.verdict,
        conventions=CONVENTIONS,
        annotations=[n for n in (note_a, note_b) if n],
    )


def _cmd_blt_scan(args: argparse.Namespace) -> Report:
    try:
        densities = [float(x) for x in args.densities.split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"cannot parse --densities: {exc}") from exc
    if not densities:
        raise ConfigError("--densities must list at least one density")
    group = _build_group(args)
    g_R = parse_window(args.window)
    rows = balian_low_scan(
        g_R,
        densities,
        group,
        (args.trunc_denom_exp, args.trunc_height),
        grid_density=args.grid_density,
        tol=args.tol,
        compute_duals=not args.no_duals,
    )
    bounds = [r.refined_lower_bound for r in rows if not math.isnan(r.refined_lower_bound)]
    decreasing = all(b1 > b2 for b1, b2 in zip(bounds, bounds[1:]))
    verdict = "degradation-confirmed" if decreasing else "non-monotonic"
    return Report(
        config=_run_config(args, densities=args.densities, grid_density=args.grid_density),
        result={"rows": [r.as_dict() for r in rows], "strictly_decreasing": decreasing},
        verdict=verdict,
        conventions=CONVENTIONS,
    )


def _cmd_mod_norm(args: argparse.Namespace) -> Report:
    group = _build_group(args)
    alpha, _, note_a = _parse_rational(args.alpha)
    beta, _, note_b = _parse_rational(args.beta)
    _positive(alpha, "alpha")
    _positive(beta, "beta")
    g_R = parse_window(args.window)
    lat = AdelicTFLattice.create(group, alpha, beta)
    s = math.inf if args.s.strip() in ("inf", "oo") else float(args.s)
    t = math.inf if args.t.strip() in ("inf", "oo") else float(args.t)
    w = SeparableWindow(g_R, {}, group)
    value = modulation_norm(w, w, lat, s, t, (args.trunc_denom_exp, args.trunc_height), args.tol)
    return Report(
        config=_run_config(args, s=args.s, t=args.t),
        result={"modulation_norm": value, "s": args.s, "t": args.t},
        verdict="computed",
        conventions=CONVENTIONS,
        annotations=[n for n in (note_a, note_b) if n],
    )


def _cmd_reduce(args: argparse.Namespace) -> Report:
    group = _build_group(args)
    alpha, _, note_a = _parse_rational(args.alpha)
    _positive(alpha, "alpha")
    real, _, note_r = _parse_rational(args.real)
    try:
        finite_doc = json.loads(args.finite)
        finite = {int(p): Fraction(str(v)) for p, v in finite_doc.items()}
    except (ValueError, TypeError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot parse --finite: {exc}") from exc
    point = AdelicPoint(real, finite)
    b, q = fundamental_domain_reduce(point, alpha, group)
    return Report(
        config=_run_config(args, real=args.real, finite=args.finite),
        result={"offset": b.as_dict(), "q": q, "point": point.as_dict()},
        verdict="reduced",
        conventions=CONVENTIONS,
        annotations=[n for n in (note_a, note_r) if n],
    )


def _cmd_pair(args: argparse.Namespace) -> Report:
    group = _build_group(args)
    alpha, _, note_a = _parse_rational(args.alpha)
    _positive(alpha, "alpha")
    q, _, _ = _parse_rational(args.q)
    r, _, _ = _parse_rational(args.r)
    if not isinstance(q, Fraction) or not isinstance(r, Fraction):
        raise ConfigError("--q and --r must be rationals")
    x = lattice_embed(group, alpha, q)
    y = lattice_embed(group, Fraction(1, 1) / alpha if isinstance(alpha, Fraction) else 1.0 / alpha, r)
    phase = character_pair(x, y, group)
    return Report(
        config=_run_config(args, q=args.q, r=args.r),
        result={
            "phase": phase.as_dict(),
            "is_one": phase.is_one(),
            "exact": phase.is_exact,
            "x": x.as_dict(),
            "y": y.as_dict(),
        },
        verdict="computed",
        conventions=CONVENTIONS,
        annotations=[n for n in (note_a,) if n],
    )


def _cmd_module_check(args: argparse.Namespace) -> Report:
    group = _build_group(args)
    alpha, _, note_a = _parse_rational(args.alpha)
    beta, _, note_b = _parse_rational(args.beta)
    _positive(alpha, "alpha")
    _positive(beta, "beta")
    g_R = parse_window(args.window)
    rect = RectLattice(float(alpha), float(beta))
    try:
        h_R = _resolve_dual(args, g_R, rect)
    except NotAFrameError as exc:
        return Report(
            config=_run_config(args),
            result={"error": str(exc)},
            verdict="not-a-frame",
            conventions=CONVENTIONS,
        )
    f = SeparableWindow(g_R, {}, group)
    rep = module_axiom_check(
        f, f, SeparableWindow(h_R, {}, group),
        group, float(alpha), float(beta),
        (args.trunc_denom_exp, args.trunc_height), args.tol,
    )
    return Report(
        config=_run_config(args),
        result=rep.as_dict(),
        verdict=rep.verdict,
        conventions=CONVENTIONS,
        annotations=[n for n in (note_a, note_b) if n],
    )


def _cmd_projection_check(args: argparse.Namespace) -> Report:
    group = _build_group(args)
    alpha, _, note_a = _parse_rational(args.alpha)
    beta, _, note_b = _parse_rational(args.beta)
    _positive(alpha, "alpha")
    _positive(beta, "beta")
    g_R = parse_window(args.window)
    rep = projection_check(
        g_R, float(alpha), float(beta), group,
        (args.trunc_denom_exp, args.trunc_height), args.tol,
    )
    return Report(
        config=_run_config(args),
        result=rep.as_dict(),
        verdict=rep.verdict,
        conventions=CONVENTIONS,
        annotations=[n for n in (note_a, note_b) if n],
    )


_COMMANDS = {
    "wr-check": _cmd_wr_check,
    "equivalence": _cmd_equivalence,
    "blt-scan": _cmd_blt_scan,
    "mod-norm": _cmd_mod_norm,
    "reduce": _cmd_reduce,
    "pair": _cmd_pair,
    "module-check": _cmd_module_check,
    "projection-check": _cmd_projection_check,
}


def _add_common_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--group", choices=["real", "rxqp", "adele"], default="adele")
    sub.add_argument("--prime", type=int, default=2)
    sub.add_argument("--alpha", default="1")
    sub.add_argument("--beta", default="1")
    sub.add_argument("--window", default="gaussian")
    sub.add_argument("--dual", choices=["auto", "self", "file"], default="auto")
    sub.add_argument("--dual-file", default=None)
    sub.add_argument("--trunc-height", type=int, default=5)
    sub.add_argument("--trunc-denom-exp", type=int, default=3)
    sub.add_argument("--tol", type=float, default=1e-8)
    sub.add_argument("--output", choices=["json", "csv"], default="json")
    sub.add_argument("--out-file", default=None, help="write the report here instead of stdout")
    sub.add_argument("--config", default=None, help="JSON file supplying defaults for any flag")
    sub.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adelic-gabor",
        description="Gabor frame diagnostics on R, R x Q_p and the adeles",
    )
    subparsers = parser.add_subparsers(dest="subcommand", required=True)
    for name in _COMMANDS:
        sub = subparsers.add_parser(name)
        _add_common_flags(sub)
        if name == "blt-scan":
            sub.add_argument("--densities", default="0.8,0.9,0.95,0.99,1.0")
            sub.add_argument("--grid-density", type=int, default=32)
            sub.add_argument("--no-duals", action="store_true")
        if name == "mod-norm":
            sub.add_argument("--s", default="2")
            sub.add_argument("--t", default="2")
        if name == "reduce":
            sub.add_argument("--real", default="0")
            sub.add_argument("--finite", default="{}")
        if name == "pair":
            sub.add_argument("--q", default="0")
            sub.add_argument("--r", default="0")
    return parser


def _apply_config_file(argv: Sequence[str], parser: argparse.ArgumentParser) -> argparse.Namespace:
    args = parser.parse_args(list(argv))
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                overrides = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read --config {args.config!r}: {exc}") from exc
        if not isinstance(overrides, dict):
            raise ConfigError("--config must contain a JSON object")
        # config supplies defaults: explicit command-line flags win
        given = {a.lstrip("-").split("=", 1)[0].replace("-", "_") for a in argv if a.startswith("--")}
        for key, value in overrides.items():
            attr = key.replace("-", "_")
            if not hasattr(args, attr):
                raise ConfigError(f"unknown config key {key!r}")
            if attr not in given and attr not in ("config",):
                setattr(args, attr, value)
    return args


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = _apply_config_file(sys.argv[1:] if argv is None else argv, parser)
        start = time.perf_counter()
        report = _COMMANDS[args.subcommand](args)
        report = Report(
            config=report.config,
            result=report.result,
            verdict=report.verdict,
            conventions=report.conventions,
            annotations=report.annotations,
            timing_seconds=time.perf_counter() - start,
        )
        payload = emit(report, args.output)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AccuracyError as exc:
        print(f"accuracy error: {exc}", file=sys.stderr)
        return EXIT_ACCURACY
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out_file:
        with open(args.out_file, "wb") as fh:
            fh.write(payload)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.buffer.flush()
    if report.timing_seconds is not None:
        print(f"# timing: {report.timing_seconds:.3f}s", file=sys.stderr)
    return EXIT_SUCCESS if report.verdict in _SUCCESS_VERDICTS else EXIT_VERDICT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
