"""The two admissions arguments as integer feasibility instances."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from ..ratmath import as_rational
from .ilp import IlpInstance

__all__ = [
    "AdmissionsData",
    "GENDERS",
    "MULTIPLICATIVE",
    "ADDITIVE",
    "build_arg1",
    "build_arg2",
    "disjunct_bounds",
    "rate_ratio",
]

GENDERS = ("m", "f")
MULTIPLICATIVE = "multiplicative"
ADDITIVE = "additive"

REL_TOL = Fraction(37, 1000)
ABS_TOL = 9
ARG2_TOL = 6
ROUND_TOL = Fraction(1, 2)

# department: (men applied, men accepted, women applied, women accepted)
_TABLE = {
    1: (825, 512, 108, 89),
    2: (560, 353, 25, 17),
    3: (325, 120, 593, 202),
    4: (417, 138, 375, 131),
    5: (191, 53, 393, 94),
    6: (373, 22, 341, 24),
}


@dataclass(frozen=True)
class AdmissionsData:
    applied: Mapping[int, Mapping[str, int]] = field(
        default_factory=lambda: {d: {"m": r[0], "f": r[2]} for d, r in _TABLE.items()})
    accepted: Mapping[int, Mapping[str, int]] = field(
        default_factory=lambda: {d: {"m": r[1], "f": r[3]} for d, r in _TABLE.items()})

    def __post_init__(self):
        if set(self.applied) != set(self.accepted):
            raise ValueError("applied and accepted cover different departments")
        for d in self.departments:
            for g in GENDERS:
                if not 0 <= self.accepted[d][g] <= self.applied[d][g]:
                    raise ValueError(f"department {d}, gender {g}: accepted exceeds applied")

    @property
    def departments(self) -> list[int]:
        return sorted(self.applied)

    def app(self, d: int | None = None, g: str | None = None) -> int:
        return self._total(self.applied, d, g)

    def acc(self, d: int | None = None, g: str | None = None) -> int:
        return self._total(self.accepted, d, g)

    def _total(self, table, d, g) -> int:
        ds = [d] if d is not None else self.departments
        gs = [g] if g is not None else list(GENDERS)
        return sum(table[x][y] for x in ds for y in gs)

    def rate(self, g: str) -> Fraction:
        return Fraction(self.acc(g=g), self.app(g=g))


def rate_ratio(data: AdmissionsData) -> Fraction:
    """(men's acceptance rate) / (women's acceptance rate) in the actual round."""
    return data.rate("m") / data.rate("f")


def _integral(coeffs: Mapping[str, Fraction], *rhs: Fraction):
    # scale to integer coefficients; multiplying by a positive constant keeps every relation
    vals = [as_rational(c) for c in coeffs.values()] + [as_rational(r) for r in rhs]
    m = math.lcm(*(v.denominator for v in vals)) if vals else 1
    return {k: as_rational(c) * m for k, c in coeffs.items()}, [as_rational(r) * m for r in rhs]


def acc_var(d: int, g: str | None = None) -> str:
    return f"AccH_{d}" if g is None else f"AccH_{d}_{g}"


def app_var(d: int, g: str) -> str:
    return f"AppH_{d}_{g}"


def disjunct_bounds(data: AdmissionsData, disjunct: str) -> dict[int, tuple[int, int]]:
    """Integer range each hypothetical department total is confined to by the disjunct."""
    out = {}
    for d in data.departments:
        a = data.acc(d)
        if disjunct == MULTIPLICATIVE:
            lo, hi = a * (1 - REL_TOL), a * (1 + REL_TOL)
        elif disjunct == ADDITIVE:
            lo, hi = Fraction(a - ABS_TOL), Fraction(a + ABS_TOL)
        else:
            raise ValueError(f"unknown disjunct {disjunct!r}")
        out[d] = (max(math.ceil(lo), 0), min(math.floor(hi), data.app(d)))
    return out


def build_arg1(data: AdmissionsData, disjunct: str, *, strict: bool = False,
               negate: bool = True) -> IlpInstance:
    """Gender-blind hypothetical acceptances close to the actual department totals.

    Within a department the hypothetical acceptances split between genders
    in proportion to applications, up to the rounding allowance of 1/2.
    ``strict`` adds the exact proportionality equations as well.  The
    negated claim says the hypothetical men/women rate ratio is no smaller
    than the actual one.
    """
    inst = IlpInstance(f"arg1-{disjunct}{'-strict' if strict else ''}{'' if negate else '-no-negation'}")
    for d in data.departments:
        for g in GENDERS:
            inst.add_var(acc_var(d, g), 0, data.app(d, g))
        inst.add_var(acc_var(d), 0, data.app(d))
    for d in data.departments:
        ad = data.app(d)
        for g in GENDERS:
            # |AccH_d_g - AccH_d * App_dg / App_d| <= 1/2, times App_d
            coeffs, (lo, hi) = _integral({acc_var(d, g): ad, acc_var(d): -data.app(d, g)},
                                         -ROUND_TOL * ad, ROUND_TOL * ad)
            inst.add_range(coeffs, lo, hi, f"window:{d}:{g}")
            if strict:
                inst.add({acc_var(d, g): ad, acc_var(d): -data.app(d, g)}, "=", 0, f"strict:{d}:{g}")
        inst.add({acc_var(d, "m"): 1, acc_var(d, "f"): 1, acc_var(d): -1}, "=", 0, f"sum:{d}")
        a = data.acc(d)
        if disjunct == MULTIPLICATIVE:
            lo, hi = a * (1 - REL_TOL), a * (1 + REL_TOL)
        elif disjunct == ADDITIVE:
            lo, hi = Fraction(a - ABS_TOL), Fraction(a + ABS_TOL)
        else:
            raise ValueError(f"unknown disjunct {disjunct!r}")
        coeffs, (lo, hi) = _integral({acc_var(d): 1}, lo, hi)
        inst.add_range(coeffs, lo, hi, f"disjunct:{d}")
    if negate:
        # (sum_m / App_m) / (sum_f / App_f) <= rate_ratio, cross-multiplied
        c = rate_ratio(data)
        coeffs = {}
        for d in data.departments:
            coeffs[acc_var(d, "m")] = Fraction(data.app(g="f"))
            coeffs[acc_var(d, "f")] = -c * data.app(g="m")
        coeffs, (rhs,) = _integral(coeffs, Fraction(0))
        g = math.gcd(*(int(v) for v in coeffs.values()))
        coeffs = {k: v / g for k, v in coeffs.items()}
        inst.add(coeffs, "<=", rhs, "negation")
    return inst


def build_arg2(data: AdmissionsData, *, negate: bool = True) -> IlpInstance:
    """Hypothetical round with gender-independent application rates per department.

    Department and gender application totals match the actual round, each
    department's applications split by gender within 6 of the proportional
    split, and each group's acceptances are within 6 of what its actual
    acceptance rate would give.  The negated claim says women's overall
    hypothetical acceptance rate is at most men's.
    """
    inst = IlpInstance(f"arg2{'' if negate else '-no-negation'}")
    total = data.app()
    for d in data.departments:
        for g in GENDERS:
            inst.add_var(app_var(d, g), 0, data.app(d))
    for d in data.departments:
        for g in GENDERS:
            inst.add_var(acc_var(d, g), 0, data.app(d))
    for d in data.departments:
        inst.add({app_var(d, "m"): 1, app_var(d, "f"): 1}, "=", data.app(d), f"dept-apps:{d}")
    for g in GENDERS:
        inst.add({app_var(d, g): 1 for d in data.departments}, "=", data.app(g=g), f"gender-apps:{g}")
    for d in data.departments:
        for g in GENDERS:
            target = Fraction(data.app(g=g) * data.app(d), total)
            coeffs, (lo, hi) = _integral({app_var(d, g): 1}, target - ARG2_TOL, target + ARG2_TOL)
            inst.add_range(coeffs, lo, hi, f"apprate:{d}:{g}")
    for d in data.departments:
        for g in GENDERS:
            r = Fraction(data.acc(d, g), data.app(d, g))
            coeffs, (lo, hi) = _integral({acc_var(d, g): 1, app_var(d, g): -r}, -ARG2_TOL, ARG2_TOL)
            inst.add_range(coeffs, lo, hi, f"accrate:{d}:{g}")
            inst.add({acc_var(d, g): 1, app_var(d, g): -1}, "<=", 0, f"subset:{d}:{g}")
    if negate:
        coeffs = {}
        for d in data.departments:
            coeffs[acc_var(d, "f")] = data.app(g="m")
            coeffs[acc_var(d, "m")] = -data.app(g="f")
        inst.add(coeffs, "<=", 0, "negation")
    return inst
