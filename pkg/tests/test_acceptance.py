"""The twelve acceptance criteria, each at its stated tolerance and time limit.

Every test prints one PASS/FAIL line (visible even under output capture)
before asserting.
"""
import math
import random
import time
from fractions import Fraction as F

import pytest

from argulab.berkeley import (ADDITIVE, MULTIPLICATIVE, AdmissionsData, build_arg1, build_arg2, disjunct_bounds,
                              solve_ilp, verify_berkeley)
from argulab.berkeley.ilp import INFEASIBLE
from argulab.distributions import OutcomeSpace, cond_binom, cond_hyper
from argulab.hay import HairData, HayModel, alpha_bound, likelihood_ratio, region_4bin, region_5bin
from argulab.hay.likelihood import argmax, fixed_min_scan, thin_interval_scan
from argulab.hay.region import monte_carlo_hits, shape_mask_5bin
from argulab.ratmath import binom_coeff
from argulab.report import render_decimal
from argulab.smoking import (CORNER_THRESHOLDS, SEARCH_LABEL, StudyData, binom_ratio, search_conjecture1,
                             verify_conjecture2)

from oracles import enumerate_cond_binom, enumerate_cond_hyper, quad_over_region


@pytest.fixture
def verdict(capsys):
    def emit(n, ok, msg):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {msg}")
        assert ok, msg

    return emit


def test_01_condbinom_identity(verdict):
    t0 = time.perf_counter()
    n, total = 649, 1269
    space = OutcomeSpace(620, 649)
    den = binom_coeff(2 * n, total)
    ok = True
    for p in (F(1, 3), F(1, 2), F(9, 10)):
        dist = cond_binom(p, p, n, total, space)
        ok &= all(dist[a] == F(binom_coeff(n, a) * binom_coeff(n, total - a), den) for a in space)
    dt = time.perf_counter() - t0
    verdict(1, ok and dt < 1, f"equal-rate conditional binomial equals the closed form ({dt:.2f}s)")


def test_02_conjecture2(verdict):
    t0 = time.perf_counter()
    d = StudyData()
    corner = (F(589, 605), F(723, 780))
    at = {k: binom_ratio(k, *corner, d) for k in (0, 1, 2)}
    corner_ok = all(at[k] > thr for k, thr in CORNER_THRESHOLDS.items())
    rep = verify_conjecture2(d, 50)
    lattice_ok = all(v > 2000 for v in rep.min_ratio.values())
    dt = time.perf_counter() - t0
    msg = (f"corner ratios {', '.join(render_decimal(at[k]) for k in (0, 1, 2))}; "
           f"lattice minima {', '.join(render_decimal(rep.min_ratio[k]) for k in (0, 1, 2))} ({dt:.1f}s)")
    verdict(2, corner_ok and lattice_ok and rep.points_evaluated == 2500 and dt < 120, msg)


def test_03_conjecture1_search(verdict):
    t0 = time.perf_counter()
    rep = search_conjecture1(StudyData(), samples=1000, seed=0, notlc_cap=20, threshold=5000)
    dt = time.perf_counter() - t0
    labelled = "not a proof" in rep.label and rep.label == SEARCH_LABEL
    none_below = not rep.falsified and all(rep.min_ratio[k] > 5000 for k in (0, 1, 2))
    if rep.counterexamples:
        cx = rep.counterexamples[0]
        detail = f"{rep.violating_scenarios} of {rep.evaluated} scenarios at or below 5000, e.g. {cx.scenario} k={cx.k}"
    else:
        detail = f"no ratio at or below 5000 in {rep.evaluated} scenarios"
    verdict(3, rep.evaluated >= 1000 and labelled and none_below and dt < 600, f"{detail} ({dt:.0f}s)")


def test_04_hay_volumes(verdict):
    t0 = time.perf_counter()
    r = region_4bin()
    vols = r.cell_volumes()
    mean = r.mean(0)
    dt = time.perf_counter() - t0
    ok = vols == [F(1, 144)] * 4 and sum(vols) == F(1, 36) == r.volume() and mean == F(1, 16)
    verdict(4, ok and dt < 10, f"cells {vols[0]}, total {sum(vols)}, mean p1 {mean} ({dt:.2f}s)")


def test_05_hay_main_claim(verdict):
    t0 = time.perf_counter()
    lr = likelihood_ratio(HayModel(F(849, 1000), 1), HairData())
    dt = time.perf_counter() - t0
    verdict(5, lr < F(997, 1000) and dt < 300, f"ratio at (.849, 1) = {render_decimal(lr)} ({dt:.1f}s)")


def test_06_hay_figures(verdict):
    d = HairData()
    h = HayModel(F(849, 1000), 1)
    step = F(1, 1000)
    a, r = argmax(thin_interval_scan(h, d, step))
    b, rb = argmax(fixed_min_scan(h, d, F(849, 1000), step))
    ok = abs(r - F(127, 100)) <= F(2, 100) and abs(a - F(935, 1000)) <= F(1, 100) and b == 1
    verdict(6, ok, f"thin-interval peak {render_decimal(r)} at {render_decimal(a)}; "
                   f"fixed-min scan peak at alpha_max {b} ({render_decimal(rb)})")


def test_07_alpha_bound(verdict):
    b = alpha_bound(15, F(4, 11))
    b2 = alpha_bound(F(139, 10), F(4, 11))
    ok = b == F(60, 71) and abs(b - F(84507, 100000)) <= F(1, 10**5) and b2 <= F(835, 1000)
    verdict(7, ok, f"bound(15) = {b} = {render_decimal(b)}; bound(13.9) = {render_decimal(b2)}")


def test_08_hay_five_bins(verdict):
    r5 = region_5bin()
    mean = r5.mean(0)
    lr = likelihood_ratio(HayModel(F(835, 1000), 1, r5), HairData().with_open_top_bin())
    samples = 10**6
    hits = monte_carlo_hits(5, shape_mask_5bin, samples, seed=0)
    p = F(len(r5.cells), math.factorial(5))
    mc_ok = (F(hits, samples) - p) ** 2 <= 9 * p * (1 - p) / samples
    ok = mean < F(57, 1000) and lr < 1 and mc_ok
    verdict(8, ok, f"mean p1 {mean} = {render_decimal(mean)} (needs < 0.057); ratio at (.835, 1) "
                   f"{render_decimal(lr)}; Monte-Carlo volume within 3 sigma: {mc_ok}")


def test_09_berkeley_arg1(verdict):
    t0 = time.perf_counter()
    data = AdmissionsData()
    statuses = {disj: solve_ilp(build_arg1(data, disj)).status for disj in (MULTIPLICATIVE, ADDITIVE)}
    b = disjunct_bounds(data, MULTIPLICATIVE)
    dt = time.perf_counter() - t0
    ok = all(s == INFEASIBLE for s in statuses.values()) and b[6] == (45, 47) and b[1] == (579, 623)
    verdict(9, ok and dt < 60, f"{statuses}; AccH6 in {b[6]}, AccH1 in {b[1]} ({dt:.1f}s)")


def test_10_berkeley_arg2(verdict):
    t0 = time.perf_counter()
    data = AdmissionsData()
    neg = solve_ilp(build_arg2(data))
    inst = build_arg2(data, negate=False)
    free = solve_ilp(inst)
    dt = time.perf_counter() - t0
    ok = neg.status == INFEASIBLE and free.feasible and inst.violations(free.witness) == []
    verdict(10, ok and dt < 300, f"negated {neg.status}; without negation {free.status}, witness verified ({dt:.1f}s)")


def test_11_data_invariants(verdict):
    res = verify_berkeley()
    claims = {c.claim_id: c for c in res.claims}
    t = claims["berkeley.totals"].details
    rm, rf = claims["berkeley.rate_m"].value, claims["berkeley.rate_f"].value
    ok = ((t["applied"], t["applied_m"], t["applied_f"], t["accepted"]) == (4526, 2691, 1835, 1755)
          and rm == F(1198, 2691) and rf == F(557, 1835)
          and render_decimal(rm).startswith("0.445") and render_decimal(rf).startswith("0.3035"))
    verdict(11, ok, f"totals 4526/2691/1835/1755, rates {render_decimal(rm)} and {render_decimal(rf)}")


def test_12_oracle_equivalence(verdict):
    rng = random.Random(12)
    hyper_ok = 0
    while hyper_ok < 100:
        x1, x2 = rng.randint(1, 5), rng.randint(1, 5)
        n1, n2 = rng.randint(0, x1), rng.randint(0, x2)
        s1, s2 = rng.randint(0, x1), rng.randint(0, x2)
        total = rng.randint(0, n1 + n2)
        args = (s1, s2, x1, x2, n1, n2, total, OutcomeSpace(0, n1))
        try:
            want = enumerate_cond_hyper(*args)
        except ZeroDivisionError:
            continue
        assert dict(cond_hyper(*args).mass) == want
        hyper_ok += 1
    binom_ok = 0
    while binom_ok < 100:
        n = rng.randint(1, 5)
        total = rng.randint(0, 2 * n)
        p1, p2 = F(rng.randint(1, 9), 10), F(rng.randint(1, 9), 10)
        space = OutcomeSpace(max(0, total - n), min(n, total))
        assert dict(cond_binom(p1, p2, n, total, space).mass) == enumerate_cond_binom(p1, p2, n, total, space)
        binom_ok += 1
    r4 = region_4bin()
    worst = 0.0
    for _ in range(10):
        e = [rng.randint(0, 5) for _ in range(4)]
        exact = r4.moment(e)
        approx = quad_over_region(r4, lambda p: p[0] ** e[0] * p[1] ** e[1] * p[2] ** e[2] * p[3] ** e[3])
        worst = max(worst, abs(approx / float(exact) - 1))
    verdict(12, hyper_ok == binom_ok == 100 and worst < 1e-6,
            f"100 + 100 enumeration matches; worst quadrature relative error {worst:.1e}")
