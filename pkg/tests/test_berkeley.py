import random
from fractions import Fraction as F

import numpy as np
import pytest

from argulab.berkeley import (ADDITIVE, MULTIPLICATIVE, AdmissionsData, build_arg1, build_arg2, disjunct_bounds,
                              rate_ratio, solve_ilp, solve_lp, verify_berkeley)
from argulab.berkeley.ilp import INFEASIBLE

DATA = AdmissionsData()


def highs_feasible(inst):
    from scipy.optimize import Bounds, LinearConstraint, milp

    names = inst.names
    idx = {n: i for i, n in enumerate(names)}
    A = np.zeros((len(inst.constraints), len(names)))
    lo = np.full(len(inst.constraints), -np.inf)
    hi = np.full(len(inst.constraints), np.inf)
    for r, c in enumerate(inst.constraints):
        for v, a in c.coeffs:
            A[r, idx[v]] = float(a)
        if c.relation in ("<=", "="):
            hi[r] = float(c.rhs)
        if c.relation in (">=", "="):
            lo[r] = float(c.rhs)
    res = milp(np.zeros(len(names)), constraints=LinearConstraint(A, lo, hi),
               integrality=np.ones(len(names)),
               bounds=Bounds([v.lower for v in inst.variables], [v.upper for v in inst.variables]))
    return res.status == 0


class TestData:
    def test_totals(self):
        assert DATA.app() == 4526
        assert DATA.acc() == 1755
        assert (DATA.app(g="m"), DATA.app(g="f")) == (2691, 1835)

    def test_rates(self):
        assert DATA.rate("m") == F(1198, 2691)
        assert DATA.rate("f") == F(557, 1835)
        assert round(float(DATA.rate("m")), 3) == 0.445
        assert round(float(DATA.rate("f")), 3) == 0.304

    def test_rate_ratio(self):
        assert rate_ratio(DATA) == F(1198, 2691) / F(557, 1835)

    def test_accepted_above_applied(self):
        with pytest.raises(ValueError):
            AdmissionsData(applied={1: {"m": 1, "f": 1}}, accepted={1: {"m": 2, "f": 0}})


class TestArg1:
    def test_claimed_bounds(self):
        b = disjunct_bounds(DATA, MULTIPLICATIVE)
        assert b[6] == (45, 47)
        assert b[1] == (579, 623)

    def test_additive_bounds(self):
        b = disjunct_bounds(DATA, ADDITIVE)
        assert b[6] == (37, 55)

    def test_shape(self):
        inst = build_arg1(DATA, MULTIPLICATIVE)
        assert len(inst.variables) == 18
        assert all(c.relation in ("<=", ">=", "=") for c in inst.constraints)
        # integer coefficients after cross-multiplication
        assert all(a.denominator == 1 for c in inst.constraints for _, a in c.coeffs)
        assert all(c.rhs.denominator == 1 for c in inst.constraints)

    def test_negation_row(self):
        neg = [c for c in build_arg1(DATA, MULTIPLICATIVE).constraints if c.label == "negation"]
        assert len(neg) == 1
        coeffs = dict(neg[0].coeffs)
        assert coeffs["AccH_1_m"] == 557 and coeffs["AccH_1_f"] == -1198

    @pytest.mark.parametrize("disjunct", [MULTIPLICATIVE, ADDITIVE])
    def test_infeasible(self, disjunct):
        inst = build_arg1(DATA, disjunct)
        assert solve_ilp(inst).status == INFEASIBLE
        assert not highs_feasible(inst)

    @pytest.mark.parametrize("disjunct", [MULTIPLICATIVE, ADDITIVE])
    def test_relaxation_needs_integrality(self, disjunct):
        # the LP relaxation alone does not refute the negation
        point, _ = solve_lp(build_arg1(DATA, disjunct))
        assert point is not None

    def test_feasible_without_negation(self):
        inst = build_arg1(DATA, MULTIPLICATIVE, negate=False)
        res = solve_ilp(inst)
        assert res.feasible and not inst.violations(res.witness)
        assert highs_feasible(inst)

    def test_actual_counts_meet_bounds_only_instance(self):
        inst = build_arg1(DATA, MULTIPLICATIVE, negate=False).without("window")
        actual = {}
        for d in DATA.departments:
            for g in ("m", "f"):
                actual[f"AccH_{d}_{g}"] = DATA.acc(d, g)
            actual[f"AccH_{d}"] = DATA.acc(d)
        assert inst.violations(actual) == []

    def test_strict_mode_is_vacuous(self):
        inst = build_arg1(DATA, MULTIPLICATIVE, strict=True, negate=False)
        assert solve_ilp(inst).status == INFEASIBLE

    def test_permutation_invariance(self):
        inst = build_arg1(DATA, ADDITIVE)
        names = inst.names[:]
        random.Random(4).shuffle(names)
        assert solve_ilp(inst.permuted(names)).status == INFEASIBLE

    def test_cross_multiplication_equivalence(self):
        # window rows agree with the ratio form at random integer points
        rng = random.Random(9)
        inst = build_arg1(DATA, MULTIPLICATIVE, negate=False)
        for _ in range(300):
            d = rng.choice(DATA.departments)
            g = rng.choice(("m", "f"))
            tot = rng.randint(1, DATA.app(d))
            x = rng.randint(0, DATA.app(d, g))
            ratio_form = abs(x - F(tot * DATA.app(d, g), DATA.app(d))) <= F(1, 2)
            pt = {f"AccH_{d}_{g}": x, f"AccH_{d}": tot}
            rows = [c for c in inst.constraints if c.label.startswith(f"window:{d}:{g}:")]
            assert all(c.holds(pt) for c in rows) == ratio_form

    def test_negation_equivalence(self):
        rng = random.Random(10)
        neg = [c for c in build_arg1(DATA, ADDITIVE).constraints if c.label == "negation"][0]
        for _ in range(300):
            m, f = rng.randint(1, 2691), rng.randint(1, 1835)
            pt = {v: 0 for v, _ in neg.coeffs}
            pt["AccH_1_m"], pt["AccH_1_f"] = m, f
            assert neg.holds(pt) == (F(m, 2691) / F(f, 1835) <= rate_ratio(DATA))


class TestArg2:
    def test_shape(self):
        inst = build_arg2(DATA)
        assert len(inst.variables) == 24
        assert all(c.rhs.denominator == 1 and all(a.denominator == 1 for _, a in c.coeffs)
                   for c in inst.constraints)

    def test_infeasible(self):
        inst = build_arg2(DATA)
        assert solve_ilp(inst).status == INFEASIBLE
        assert not highs_feasible(inst)

    def test_lp_relaxation_already_infeasible(self):
        point, _ = solve_lp(build_arg2(DATA))
        assert point is None

    def test_without_negation(self):
        inst = build_arg2(DATA, negate=False)
        res = solve_ilp(inst)
        assert res.feasible
        assert inst.violations(res.witness) == []
        assert sum(res.witness[f"AppH_{d}_m"] for d in DATA.departments) == 2691
        assert highs_feasible(inst)

    def test_permutation_invariance(self):
        inst = build_arg2(DATA)
        assert solve_ilp(inst.permuted(list(reversed(inst.names)))).status == INFEASIBLE


def test_verify_berkeley():
    res = verify_berkeley(strict=True)
    status = {c.claim_id: c.status for c in res.claims}
    assert status["berkeley.goal"] == "pass"
    assert status["berkeley.arg1.multiplicative"] == status["berkeley.arg1.additive"] == "pass"
    assert status["berkeley.arg2"] == "pass"
    assert "berkeley.strict.no_negation" in status
    goal = [c for c in res.claims if c.claim_id == "berkeley.goal"][0]
    assert "premise" in goal.details
    assert "arg2.lp.txt" in res.artifacts
