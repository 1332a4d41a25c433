"""Run both admissions arguments and derive the goal sentence."""
from __future__ import annotations

from fractions import Fraction

from ..report import PASS, CaseResult, Claim, status_of
from .arguments import (ADDITIVE, GENDERS, MULTIPLICATIVE, AdmissionsData, acc_var, build_arg1, build_arg2,
                        disjunct_bounds, rate_ratio)
from .ilp import INFEASIBLE, FeasibilityResult, IlpInstance, solve_ilp

__all__ = ["verify_berkeley", "EXPECTED_TOTALS", "CLAIMED_BOUNDS", "BIAS_PREMISE"]

EXPECTED_TOTALS = {"applied": 4526, "accepted": 1755, "applied_m": 2691, "applied_f": 1835}
CLAIMED_BOUNDS = {6: (45, 47), 1: (579, 623)}
BIAS_PREMISE = "the admissions statistics are the only evidence of bias (assumed premise)"


def _result_details(inst: IlpInstance, res: FeasibilityResult) -> dict:
    out = {"instance": inst.name, "result": res.status, "nodes": res.nodes, "pivots": res.pivots,
           "variables": len(inst.variables), "constraints": len(inst.constraints)}
    if res.witness is not None:
        out["witness"] = res.witness
        out["witness_violations"] = inst.violations(res.witness)
    return out


def _solve(inst: IlpInstance, dumps: dict[str, str], **budget) -> FeasibilityResult:
    dumps[f"{inst.name}.lp.txt"] = inst.dump()
    return solve_ilp(inst, **budget)


def verify_berkeley(data: AdmissionsData | None = None, strict: bool = False, **budget) -> CaseResult:
    """Check both arguments; ``budget`` is passed to the solver (max_nodes, max_pivots)."""
    data = data or AdmissionsData()
    claims = []
    dumps: dict[str, str] = {}

    totals = {"applied": data.app(), "accepted": data.acc(), "applied_m": data.app(g="m"),
              "applied_f": data.app(g="f"), "accepted_m": data.acc(g="m"), "accepted_f": data.acc(g="f")}
    ok = all(totals[k] == v for k, v in EXPECTED_TOTALS.items())
    claims.append(Claim("berkeley.totals", status_of(ok, refutes=False), Fraction(totals["applied"]),
                        "4526 applications, 1755 acceptances, 2691 men, 1835 women", totals))
    claims.append(Claim("berkeley.rate_m", PASS, data.rate("m"), "men accepted at 44.5%"))
    claims.append(Claim("berkeley.rate_f", PASS, data.rate("f"), "women accepted at 30.4%"))
    c = rate_ratio(data)
    claims.append(Claim("berkeley.rate_ratio", PASS, c, "constant used in the first argument's negation"))

    mb = disjunct_bounds(data, MULTIPLICATIVE)
    for d, (lo, hi) in sorted(CLAIMED_BOUNDS.items()):
        claims.append(Claim(f"berkeley.arg1.bounds_{d}", status_of(mb[d] == (lo, hi), refutes=False),
                            None, f"{lo} <= AccH{d} <= {hi}", {"derived": list(mb[d])}))

    infeasible = {}
    for disj in (MULTIPLICATIVE, ADDITIVE):
        inst = build_arg1(data, disj)
        res = _solve(inst, dumps, **budget)
        infeasible[f"arg1.{disj}"] = res.status == INFEASIBLE
        claims.append(Claim(f"berkeley.arg1.{disj}", status_of(res.status == INFEASIBLE), None,
                            "negated claim is infeasible", _result_details(inst, res)))

    # reality meets every constraint except the rounding windows and the negation
    actual = {}
    for d in data.departments:
        for g in GENDERS:
            actual[acc_var(d, g)] = data.acc(d, g)
        actual[acc_var(d)] = data.acc(d)
    sanity = {}
    for disj in (MULTIPLICATIVE, ADDITIVE):
        relaxed = build_arg1(data, disj, negate=False).without("window")
        sanity[disj] = relaxed.violations(actual)
    claims.append(Claim("berkeley.arg1.actual_counts", status_of(not any(sanity.values()), refutes=False), None,
                        "actual acceptances pass the instance without windows and negation",
                        {"violations": sanity}))

    inst = build_arg2(data)
    res = _solve(inst, dumps, **budget)
    infeasible["arg2"] = res.status == INFEASIBLE
    claims.append(Claim("berkeley.arg2", status_of(res.status == INFEASIBLE), None,
                        "negated claim is infeasible", _result_details(inst, res)))
    inst = build_arg2(data, negate=False)
    res = _solve(inst, dumps, **budget)
    ok = res.feasible and not inst.violations(res.witness)
    claims.append(Claim("berkeley.arg2.no_negation", status_of(ok, refutes=False), None,
                        "a compliant hypothetical round exists", _result_details(inst, res)))

    goal = all(infeasible.values())
    claims.append(Claim("berkeley.goal", status_of(goal), None,
                        "both arguments go through, so the suit should be dismissed",
                        {"premise": BIAS_PREMISE, "instances": infeasible}))

    if strict:
        for negate in (True, False):
            inst = build_arg1(data, MULTIPLICATIVE, strict=True, negate=negate)
            res = _solve(inst, dumps, **budget)
            tag = "negated" if negate else "no_negation"
            # exact integer rate equality is expected to be unsatisfiable on its own
            claims.append(Claim(f"berkeley.strict.{tag}", status_of(res.status == INFEASIBLE, refutes=False), None,
                                "with exact rate equality added the instance is vacuously infeasible",
                                {**_result_details(inst, res),
                                 "vacuous": res.status == INFEASIBLE and not negate}))

    return CaseResult(claims, {"rates": {"m": data.rate("m"), "f": data.rate("f")}, "rate_ratio": c,
                               "disjunct_bounds": {str(d): list(b) for d, b in mb.items()}},
                      artifacts=dumps)
