"""Claim records and deterministic report serialization."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Any, Iterable, Mapping

__all__ = [
    "PASS",
    "FAIL",
    "FALSIFIED",
    "SKIPPED",
    "Claim",
    "CaseResult",
    "build_report",
    "status_of",
    "render_decimal",
    "fraction_str",
    "parse_fraction",
    "exact_json",
    "dump_report",
    "load_report",
    "ReportMismatch",
]

PASS, FAIL, FALSIFIED, SKIPPED = "pass", "fail", "falsified", "skipped"
STATUSES = (PASS, FAIL, FALSIFIED, SKIPPED)

DECIMAL_DIGITS = 15


class ReportMismatch(ValueError):
    """A decimal rendering in a loaded report does not match its exact fraction."""


def fraction_str(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_fraction(s: str) -> Fraction:
    return Fraction(s)


def render_decimal(q: Fraction, digits: int = DECIMAL_DIGITS) -> str:
    """Decimal string with ``digits`` significant digits, rounded half-even."""
    q = Fraction(q)
    with localcontext() as ctx:
        ctx.prec = digits
        d = Decimal(q.numerator) / Decimal(q.denominator)
    return format(d, "g")


def exact_json(q: Fraction | int | None) -> dict[str, str] | None:
    """{"fraction": ..., "decimal": ...}, the form every number takes in a report."""
    if q is None:
        return None
    q = Fraction(q)
    return {"fraction": fraction_str(q), "decimal": render_decimal(q)}


@dataclass
class Claim:
    claim_id: str
    status: str
    value: Fraction | None = None
    expectation: str = ""
    details: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    @property
    def ok(self) -> bool:
        return self.status in (PASS, SKIPPED)

    def to_json(self) -> dict[str, Any]:
        val = exact_json(self.value)
        return {
            "claim_id": self.claim_id,
            "status": self.status,
            "exact_value_as_fraction": val["fraction"] if val else None,
            "decimal_rendering": val["decimal"] if val else None,
            "paper_expectation": self.expectation,
            "details": _jsonable(self.details),
        }


@dataclass
class CaseResult:
    claims: list[Claim]
    data: dict[str, Any] = field(default_factory=dict)
    # file name -> contents, written next to the report
    artifacts: dict[str, str] = field(default_factory=dict)


def status_of(ok: bool, *, refutes: bool = True) -> str:
    if ok:
        return PASS
    return FALSIFIED if refutes else FAIL


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        return exact_json(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, int)):
        return obj
    if isinstance(obj, float):
        raise TypeError("floats are not allowed in reports; pass the exact value")
    if isinstance(obj, Mapping):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "as_dict"):
        return _jsonable(obj.as_dict())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def build_report(case: str, claims: Iterable[Claim], parameters: Mapping[str, Any],
                 data: Mapping[str, Any] | None = None) -> dict[str, Any]:
    claims = list(claims)
    ids = [c.claim_id for c in claims]
    if len(set(ids)) != len(ids):
        raise ValueError(f"duplicate claim ids in report: {ids}")
    return {
        "case": case,
        "parameters": _jsonable(dict(parameters)),
        "claims": [c.to_json() for c in claims],
        "data": _jsonable(dict(data or {})),
    }


def dump_report(report: Mapping[str, Any]) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _check_numbers(obj: Any, path: str = "") -> None:
    if isinstance(obj, dict):
        if set(obj) == {"fraction", "decimal"}:
            if render_decimal(parse_fraction(obj["fraction"])) != obj["decimal"]:
                raise ReportMismatch(f"{path}: decimal {obj['decimal']} does not render {obj['fraction']}")
            return
        if "exact_value_as_fraction" in obj and obj.get("exact_value_as_fraction") is not None:
            if render_decimal(parse_fraction(obj["exact_value_as_fraction"])) != obj["decimal_rendering"]:
                raise ReportMismatch(f"{path}: claim decimal does not match its fraction")
        for k, v in obj.items():
            _check_numbers(v, f"{path}.{k}")
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            _check_numbers(v, f"{path}[{i}]")


def load_report(text: str) -> dict[str, Any]:
    """Parse a report and re-derive every decimal rendering from its fraction."""
    rep = json.loads(text)
    _check_numbers(rep)
    return rep
