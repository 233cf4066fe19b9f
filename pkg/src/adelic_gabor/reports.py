"""Deterministic report objects and canonical JSON/CSV emission.

Reports serialize with sorted keys, %.17g float formatting and rationals as
"a/b" strings, so two runs with equal configuration produce byte-identical
output.  Wall-clock timing is carried on the Report object for diagnostics
but excluded from the emitted bytes to keep the determinism contract.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence

SCHEMA = "adelic-gabor/1"

__all__ = ["SCHEMA", "Report", "RunConfig", "canonical_json", "emit"]


@dataclass(frozen=True)
class RunConfig:
    """Echoable CLI/run configuration; round-trips losslessly through JSON."""

    subcommand: str
    group: str = "adele"
    prime: int = 2
    alpha: str = "1"
    beta: str = "1"
    window: str = "gaussian"
    dual: str = "auto"
    trunc_height: int = 5
    trunc_denom_exp: int = 3
    tol: float = 1e-8
    output: str = "json"
    seed: int = 0
    extras: Mapping[str, Any] = field(default_factory=dict)

    def as_dict(self) -> dict:
        base = {
            "subcommand": self.subcommand,
            "group": self.group,
            "prime": self.prime,
            "alpha": self.alpha,
            "beta": self.beta,
            "window": self.window,
            "dual": self.dual,
            "trunc_height": self.trunc_height,
            "trunc_denom_exp": self.trunc_denom_exp,
            "tol": self.tol,
            "output": self.output,
            "seed": self.seed,
        }
        base.update({k: self.extras[k] for k in sorted(self.extras)})
        return base


@dataclass(frozen=True)
class Report:
    """A versioned, deterministic result document."""

    config: RunConfig
    result: Mapping[str, Any]
    verdict: str
    conventions: Mapping[str, str] = field(default_factory=dict)
    annotations: Sequence[str] = ()
    timing_seconds: Optional[float] = None  # diagnostic only; never emitted
    schema: str = SCHEMA

    def as_dict(self) -> dict:
        return {
            "schema": self.schema,
            "config": self.config.as_dict(),
            "result": dict(self.result),
            "verdict": self.verdict,
            "conventions": dict(self.conventions),
            "annotations": list(self.annotations),
        }


def _format_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return "%.17g" % x


def _canonical_value(obj: Any, out: List[str]) -> None:
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, Fraction):
        out.append(f'"{obj.numerator}/{obj.denominator}"')
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(_format_float(obj))
    elif isinstance(obj, complex):
        out.append("{\"im\": %s, \"re\": %s}" % (_format_float(obj.imag), _format_float(obj.real)))
    elif isinstance(obj, str):
        out.append(_json_string(obj))
    elif isinstance(obj, Mapping):
        out.append("{")
        for i, key in enumerate(sorted(obj, key=str)):
            if i:
                out.append(", ")
            out.append(_json_string(str(key)))
            out.append(": ")
            _canonical_value(obj[key], out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(", ")
            _canonical_value(item, out)
        out.append("]")
    elif hasattr(obj, "as_dict"):
        _canonical_value(obj.as_dict(), out)
    else:
        raise TypeError(f"cannot canonically serialize {type(obj).__name__}")


def _json_string(s: str) -> str:
    escaped = (
        s.replace("\\", "\\\\")
        .replace('"', '\\"')
        .replace("\n", "\\n")
        .replace("\r", "\\r")
        .replace("\t", "\\t")
    )
    return f'"{escaped}"'


def canonical_json(obj: Any) -> bytes:
    """Canonical JSON bytes: sorted keys, %.17g floats, rationals as strings."""
    out: List[str] = []
    _canonical_value(obj, out)
    out.append("\n")
    return "".join(out).encode("utf-8")


def _flatten(prefix: str, obj: Any, rows: List[tuple]) -> None:
    if isinstance(obj, Mapping):
        for key in sorted(obj, key=str):
            _flatten(f"{prefix}.{key}" if prefix else str(key), obj[key], rows)
    elif isinstance(obj, (list, tuple)):
        for i, item in enumerate(obj):
            _flatten(f"{prefix}[{i}]", item, rows)
    else:
        if isinstance(obj, float):
            value = "%.17g" % obj
        elif isinstance(obj, Fraction):
            value = f"{obj.numerator}/{obj.denominator}"
        elif obj is None:
            value = ""
        else:
            value = str(obj)
        rows.append((prefix, value))


def _csv_bytes(report: Report) -> bytes:
    """CSV form: tables of row dicts become one CSV row per entry with a fixed
    header; everything else flattens to (key, value) pairs."""
    doc = report.as_dict()
    result = doc["result"]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    table = result.get("rows")
    if isinstance(table, (list, tuple)) and table and all(isinstance(r, Mapping) for r in table):
        header = sorted(table[0])
        writer.writerow(header)
        for row in table:
            writer.writerow(["%.17g" % row[k] if isinstance(row[k], float) else row[k] for k in header])
    scalars: List[tuple] = []
    _flatten("", {k: v for k, v in doc.items() if not (k == "result" and table)}, scalars)
    if table:
        _flatten("", {"result": {k: v for k, v in result.items() if k != "rows"}}, scalars)
    writer.writerow(["key", "value"])
    for key, value in scalars:
        writer.writerow([key, value])
    return buf.getvalue().encode("utf-8")


def emit(report: Report, fmt: str = "json") -> bytes:
    """Serialize a report to canonical bytes in the requested format."""
    if fmt == "json":
        return canonical_json(report.as_dict())
    if fmt == "csv":
        return _csv_bytes(report)
    raise ValueError(f"unknown output format {fmt!r}")
