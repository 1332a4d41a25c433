"""Exact integer linear feasibility: rational simplex plus branch and bound.

All arithmetic is on Fractions, so a reported status is never the product of
rounding.  The LP relaxation is solved with a phase-one simplex using
Bland's rule (smallest index enters, ties in the ratio test broken by the
smallest basic index), which cannot cycle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from ..ratmath import as_rational

__all__ = [
    "Variable",
    "Constraint",
    "IlpInstance",
    "FeasibilityResult",
    "BudgetExceeded",
    "solve_lp",
    "solve_ilp",
    "FEASIBLE",
    "INFEASIBLE",
]

FEASIBLE = "Feasible"
INFEASIBLE = "Infeasible"
RELATIONS = ("<=", ">=", "=")


class BudgetExceeded(RuntimeError):
    """The node or pivot budget ran out before the search finished."""


@dataclass(frozen=True)
class Variable:
    name: str
    lower: int
    upper: int
    integer: bool = True

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError(f"empty bounds for {self.name}: [{self.lower}, {self.upper}]")


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[tuple[str, Fraction], ...]
    relation: str
    rhs: Fraction
    label: str = ""

    @classmethod
    def make(cls, coeffs: Mapping[str, object], relation: str, rhs, label: str = "") -> "Constraint":
        if relation not in RELATIONS:
            raise ValueError(f"unknown relation {relation!r}")
        merged: dict[str, Fraction] = {}
        for k, v in coeffs.items():
            merged[k] = merged.get(k, Fraction(0)) + as_rational(v)
        items = tuple(sorted((k, v) for k, v in merged.items() if v))
        return cls(items, relation, as_rational(rhs), label)

    def lhs(self, assignment: Mapping[str, object]) -> Fraction:
        return sum((c * as_rational(assignment[v]) for v, c in self.coeffs), Fraction(0))

    def holds(self, assignment: Mapping[str, object]) -> bool:
        v = self.lhs(assignment)
        if self.relation == "<=":
            return v <= self.rhs
        if self.relation == ">=":
            return v >= self.rhs
        return v == self.rhs

    def render(self) -> str:
        terms = []
        for v, c in self.coeffs:
            terms.append(f"{'+' if c >= 0 else '-'} {abs(c)} {v}")
        body = " ".join(terms).lstrip("+ ") if terms else "0"
        return f"{self.label or '_'}: {body} {self.relation} {self.rhs}"


@dataclass
class IlpInstance:
    name: str = "ilp"
    variables: list[Variable] = field(default_factory=list)
    constraints: list[Constraint] = field(default_factory=list)

    def add_var(self, name: str, lower: int, upper: int, integer: bool = True) -> str:
        if any(v.name == name for v in self.variables):
            raise ValueError(f"duplicate variable {name}")
        self.variables.append(Variable(name, int(lower), int(upper), integer))
        return name

    def add(self, coeffs: Mapping[str, object], relation: str, rhs, label: str = "") -> Constraint:
        c = Constraint.make(coeffs, relation, rhs, label)
        known = {v.name for v in self.variables}
        unknown = [v for v, _ in c.coeffs if v not in known]
        if unknown:
            raise ValueError(f"constraint {label!r} uses undeclared variables {unknown}")
        self.constraints.append(c)
        return c

    def add_range(self, coeffs: Mapping[str, object], lo, hi, label: str = "") -> None:
        self.add(coeffs, ">=", lo, f"{label}:lo" if label else "")
        self.add(coeffs, "<=", hi, f"{label}:hi" if label else "")

    @property
    def names(self) -> list[str]:
        return [v.name for v in self.variables]

    def var(self, name: str) -> Variable:
        for v in self.variables:
            if v.name == name:
                return v
        raise KeyError(name)

    def violations(self, assignment: Mapping[str, object]) -> list[str]:
        bad = []
        for v in self.variables:
            x = as_rational(assignment[v.name])
            if not v.lower <= x <= v.upper:
                bad.append(f"bound {v.name}")
            if v.integer and x.denominator != 1:
                bad.append(f"integrality {v.name}")
        for c in self.constraints:
            if not c.holds(assignment):
                bad.append(c.label or c.render())
        return bad

    def copy(self, name: str | None = None) -> "IlpInstance":
        return IlpInstance(name or self.name, list(self.variables), list(self.constraints))

    def without(self, label_prefix: str) -> "IlpInstance":
        """Copy with every constraint whose label starts with ``label_prefix`` removed."""
        out = self.copy(f"{self.name}-without-{label_prefix}")
        out.constraints = [c for c in self.constraints if not c.label.startswith(label_prefix)]
        return out

    def with_bounds(self, bounds: Mapping[str, tuple[int, int]]) -> "IlpInstance":
        out = self.copy()
        out.variables = [Variable(v.name, *bounds[v.name], v.integer) if v.name in bounds else v
                         for v in self.variables]
        return out

    def permuted(self, order: Sequence[str]) -> "IlpInstance":
        if sorted(order) != sorted(self.names):
            raise ValueError("order must be a permutation of the variable names")
        out = self.copy(f"{self.name}-permuted")
        by_name = {v.name: v for v in self.variables}
        out.variables = [by_name[n] for n in order]
        return out

    def dump(self) -> str:
        """Plain-text listing: one variable or constraint per line, exact fractions."""
        lines = [f"# instance {self.name}", f"# {len(self.variables)} variables, {len(self.constraints)} constraints"]
        for v in self.variables:
            kind = "int" if v.integer else "real"
            lines.append(f"var {v.name} {kind} [{v.lower}, {v.upper}]")
        for c in self.constraints:
            lines.append(c.render())
        return "\n".join(lines) + "\n"


@dataclass
class FeasibilityResult:
    status: str
    witness: dict[str, int] | None = None
    nodes: int = 0
    pivots: int = 0

    @property
    def feasible(self) -> bool:
        return self.status == FEASIBLE


# LP relaxation -------------------------------------------------------------


class _Tableau:
    """Sparse phase-one simplex tableau over nonnegative columns."""

    def __init__(self, rows: list[dict[int, Fraction]], rhs: list[Fraction], basis: list[int],
                 n_cols: int, artificial: set[int]):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.n_cols = n_cols
        self.artificial = artificial
        # reduced costs of "minimize the sum of artificials"
        obj: dict[int, Fraction] = {}
        self.obj_rhs = Fraction(0)
        for i, b in enumerate(basis):
            if b in artificial:
                for j, a in rows[i].items():
                    if j not in artificial:
                        obj[j] = obj.get(j, 0) - a
                self.obj_rhs -= rhs[i]
        self.obj = {j: v for j, v in obj.items() if v}

    def pivot(self, r: int, j: int) -> None:
        row = self.rows[r]
        p = row[j]
        if p != 1:
            inv = 1 / p
            for k in row:
                row[k] *= inv
            self.rhs[r] *= inv
        items = list(row.items())
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other.get(j)
            if f:
                for k, v in items:
                    nv = other.get(k, 0) - f * v
                    if nv:
                        other[k] = nv
                    else:
                        other.pop(k, None)
                self.rhs[i] -= f * self.rhs[r]
        f = self.obj.get(j)
        if f:
            for k, v in items:
                nv = self.obj.get(k, 0) - f * v
                if nv:
                    self.obj[k] = nv
                else:
                    self.obj.pop(k, None)
            self.obj_rhs -= f * self.rhs[r]
        self.basis[r] = j

    def run(self, max_pivots: int) -> int:
        pivots = 0
        while True:
            entering = min((j for j, v in self.obj.items() if v < 0 and j not in self.artificial), default=None)
            if entering is None:
                return pivots
            best = None
            for i, row in enumerate(self.rows):
                a = row.get(entering)
                if a and a > 0:
                    key = (self.rhs[i] / a, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                # unbounded direction cannot occur for a phase-one objective bounded below by 0
                raise AssertionError("phase-one objective unbounded")
            self.pivot(best[1], entering)
            pivots += 1
            if pivots > max_pivots:
                raise BudgetExceeded(f"LP pivot budget {max_pivots} exceeded")


def solve_lp(inst: IlpInstance, bounds: Mapping[str, tuple[Fraction, Fraction]] | None = None,
             max_pivots: int = 100_000) -> tuple[dict[str, Fraction] | None, int]:
    """Feasibility of the LP relaxation.  Returns (point or None, pivots used)."""
    names = inst.names
    idx = {n: i for i, n in enumerate(names)}
    lo = [Fraction(v.lower) for v in inst.variables]
    hi = [Fraction(v.upper) for v in inst.variables]
    if bounds:
        for n, (a, b) in bounds.items():
            lo[idx[n]], hi[idx[n]] = Fraction(a), Fraction(b)
    if any(a > b for a, b in zip(lo, hi)):
        return None, 0
    n = len(names)
    rows: list[dict[int, Fraction]] = []
    rhs: list[Fraction] = []
    basis: list[int] = []
    artificial: set[int] = set()
    col = n

    def add_row(coeffs: dict[int, Fraction], rel: str, b: Fraction):
        nonlocal col
        if b < 0:
            coeffs = {j: -v for j, v in coeffs.items()}
            b = -b
            rel = {"<=": ">=", ">=": "<=", "=": "="}[rel]
        if rel == "<=":
            coeffs[col] = Fraction(1)
            basis.append(col)
            col += 1
        else:
            if rel == ">=":
                coeffs[col] = Fraction(-1)
                col += 1
            coeffs[col] = Fraction(1)
            artificial.add(col)
            basis.append(col)
            col += 1
        rows.append(coeffs)
        rhs.append(b)

    # shift x = lo + x' so every column is nonnegative
    for c in inst.constraints:
        coeffs = {idx[v]: a for v, a in c.coeffs}
        b = c.rhs - sum((a * lo[j] for j, a in coeffs.items()), Fraction(0))
        if not coeffs:
            ok = {"<=": 0 <= b, ">=": 0 >= b, "=": b == 0}[c.relation]
            if not ok:
                return None, 0
            continue
        add_row(dict(coeffs), c.relation, b)
    for j in range(n):
        add_row({j: Fraction(1)}, "<=", hi[j] - lo[j])
    tab = _Tableau(rows, rhs, basis, col, artificial)
    pivots = tab.run(max_pivots)
    if tab.obj_rhs != 0:
        return None, pivots
    x = [Fraction(0)] * n
    for i, b in enumerate(tab.basis):
        if b < n:
            x[b] = tab.rhs[i]
    return {names[j]: lo[j] + x[j] for j in range(n)}, pivots


# branch and bound -----------------------------------------------------------


def solve_ilp(inst: IlpInstance, max_nodes: int = 200_000, max_pivots: int = 100_000) -> FeasibilityResult:
    """Depth-first branch and bound on the first fractional integer variable."""
    for c in inst.constraints:
        for v, _ in c.coeffs:
            inst.var(v)
    integer = [v.name for v in inst.variables if v.integer]
    root = {v.name: (Fraction(v.lower), Fraction(v.upper)) for v in inst.variables}
    stack = [root]
    nodes = 0
    pivots = 0
    while stack:
        bounds = stack.pop()
        nodes += 1
        if nodes > max_nodes:
            raise BudgetExceeded(f"node budget {max_nodes} exceeded")
        point, used = solve_lp(inst, bounds, max_pivots)
        pivots += used
        if point is None:
            continue
        frac = next((n for n in integer if point[n].denominator != 1), None)
        if frac is None:
            witness = {n: (int(v) if v.denominator == 1 else v) for n, v in point.items()}
            bad = inst.violations(witness)
            if bad:
                raise AssertionError(f"LP point fails exact re-check: {bad[:3]}")
            return FeasibilityResult(FEASIBLE, witness, nodes, pivots)
        val = point[frac]
        lo, hi = bounds[frac]
        down = dict(bounds)
        down[frac] = (lo, Fraction(math.floor(val)))
        up = dict(bounds)
        up[frac] = (Fraction(math.ceil(val)), hi)
        # explore the down branch first
        stack.append(up)
        stack.append(down)
    return FeasibilityResult(INFEASIBLE, None, nodes, pivots)
