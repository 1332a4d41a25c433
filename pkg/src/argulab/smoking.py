"""Smoking and lung cancer: two candidate models competing on the British study.

The binomial version checks the corner-minimum conjecture exactly on the
corners and a lattice of the admissible parameter box.  The hypergeometric
version has far more freedom (population sizes and smoker counts), so it is
probed by a seeded randomized falsification search.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np

from .comparison import CandidateModel, Competition, beats_all, required_warnings, test_p
from .distributions import (
    DegenerateDistribution,
    OutcomeDistribution,
    OutcomeSpace,
    UndefinedParameters,
    cond_binom,
    cond_hyper,
)
from .ratmath import as_rational, binom_coeff
from .report import PASS, CaseResult, Claim, status_of

DEPEND_WARNING = (
    "Scientific studies have found a correlation between tobacco smoking and lung cancer "
    "that is currently best-explained by the hypothesis that smoking causes an increase in "
    "the probability that any person will get lung cancer."
)
INDEP_WARNING = ""

LC_POP_MAX = 7000
NOTLC_MIN_FACTOR = 5
CONJ1_FACTOR = Fraction(5000)
CONJ2_FACTOR = Fraction(2000)
CORNER_THRESHOLDS = {0: Fraction(12000), 1: Fraction(5000), 2: Fraction(2000)}

LATTICE_CAVEAT = (
    "lattice evaluation cannot rule out sharp extrema between grid points; "
    "the corner-minimum reading is checked, not proved"
)
SEARCH_LABEL = "property-based falsification search over sampled scenarios; not a proof"


@dataclass(frozen=True)
class AmericanStudy:
    nonsmoker_lc: int = 8
    lc: int = 605
    nonsmoker_other: int = 114
    other: int = 780


@dataclass(frozen=True)
class BritishStudy:
    lc: int = 649
    not_lc: int = 649
    smokers: int = 1269
    lc_and_smokers: int = 647
    notlc_and_smokers: int = 622


@dataclass(frozen=True)
class StudyData:
    american: AmericanStudy = field(default_factory=AmericanStudy)
    british: BritishStudy = field(default_factory=BritishStudy)

    def __post_init__(self):
        a, b = self.american, self.british
        if b.lc_and_smokers + b.notlc_and_smokers != b.smokers:
            raise ValueError("British smoker counts do not add up")
        if b.lc_and_smokers > b.lc or b.notlc_and_smokers > b.not_lc:
            raise ValueError("British smoker counts exceed group sizes")
        if a.nonsmoker_lc > a.lc or a.nonsmoker_other > a.other:
            raise ValueError("American nonsmoker counts exceed group sizes")

    @property
    def space(self) -> OutcomeSpace:
        b = self.british
        return OutcomeSpace(max(b.smokers - b.not_lc, 0), min(b.lc, b.smokers))

    @property
    def true_outcome(self) -> int:
        return self.british.lc_and_smokers


def american_nonsmoker_rates(d: StudyData) -> tuple[Fraction, Fraction]:
    a = d.american
    return Fraction(a.nonsmoker_lc, a.lc), Fraction(a.nonsmoker_other, a.other)


def nonsmoker_ratio_bound(d: StudyData) -> Fraction:
    """Upper bound on the LC / non-LC nonsmoker-rate ratio: 3 times the American one."""
    r_lc, r_other = american_nonsmoker_rates(d)
    return 3 * r_lc / r_other


def notlc_nonsmoker_floor(d: StudyData) -> Fraction:
    return american_nonsmoker_rates(d)[1] / 3


def competition(d: StudyData, models, factor=1000, ks=(0, 1, 2)) -> Competition:
    return Competition(tuple(models), d.true_outcome, d.space, frozenset(ks), as_rational(factor))


# binomial version ----------------------------------------------------------


@dataclass(frozen=True)
class BinomRegion:
    p_lc_range: tuple[Fraction, Fraction]
    p_notlc_range: tuple[Fraction, Fraction]

    def __post_init__(self):
        for lo, hi in (self.p_lc_range, self.p_notlc_range):
            if not 0 < lo <= hi < 1:
                raise ValueError("region intervals must be nonempty and inside (0, 1)")

    def contains(self, p_lc, p_notlc) -> bool:
        return (self.p_lc_range[0] <= p_lc <= self.p_lc_range[1]
                and self.p_notlc_range[0] <= p_notlc <= self.p_notlc_range[1])

    def corners(self) -> list[tuple[Fraction, Fraction]]:
        return [(a, b) for a in self.p_lc_range for b in self.p_notlc_range]

    def lattice(self, n: int) -> Iterator[tuple[int, int, Fraction, Fraction]]:
        """n x n grid including the corners, as exact rationals."""
        (a0, a1), (b0, b1) = self.p_lc_range, self.p_notlc_range
        for i in range(n):
            pa = a0 + (a1 - a0) * Fraction(i, n - 1)
            for j in range(n):
                yield i, j, pa, b0 + (b1 - b0) * Fraction(j, n - 1)


def dep_binom_region(d: StudyData) -> BinomRegion:
    # 1/2 * rate <= 1 - p <= 2 * rate
    r_lc, r_other = american_nonsmoker_rates(d)
    return BinomRegion((1 - 2 * r_lc, 1 - r_lc / 2), (1 - 2 * r_other, 1 - r_other / 2))


def dep_binom_model(p_lc, p_notlc, d: StudyData, *, check_region: bool = True) -> CandidateModel:
    p_lc, p_notlc = as_rational(p_lc), as_rational(p_notlc)
    if check_region and not dep_binom_region(d).contains(p_lc, p_notlc):
        raise ValueError(f"parameters ({p_lc}, {p_notlc}) are outside the admissible region")
    b = d.british
    dist = cond_binom(p_lc, p_notlc, b.lc, b.smokers, d.space)
    return CandidateModel("dependModel", dist, DEPEND_WARNING)


def indep_closed_form(n: int, total: int, space: OutcomeSpace) -> OutcomeDistribution:
    denom = binom_coeff(2 * n, total)
    return OutcomeDistribution(space, {a: Fraction(binom_coeff(n, a) * binom_coeff(n, total - a), denom)
                                       for a in space})


def indep_binom_model(d: StudyData) -> CandidateModel:
    b = d.british
    return CandidateModel("indepModel", indep_closed_form(b.lc, b.smokers, d.space), INDEP_WARNING)


def binom_ratio(k: int, p_lc, p_notlc, d: StudyData) -> Fraction:
    if k not in (0, 1, 2):
        raise ValueError("k must be 0, 1 or 2")
    dep = dep_binom_model(p_lc, p_notlc, d)
    ind = indep_binom_model(d)
    c = competition(d, (dep, ind))
    return test_p(c, dep, k) / test_p(c, ind, k)


def _binom_ratios(dep_dist: OutcomeDistribution, ind_tests: dict[int, Fraction], d: StudyData) -> dict[int, Fraction]:
    t = d.true_outcome
    out = {}
    for k, ind in ind_tests.items():
        num = sum((dep_dist[a] for a in range(t - k, t + k + 1) if a in d.space), Fraction(0))
        out[k] = num / ind
    return out


@dataclass
class Conjecture2Report:
    grid_n: int
    corner_ratios: dict[tuple[Fraction, Fraction], dict[int, Fraction]]
    min_ratio: dict[int, Fraction]
    min_location: dict[int, tuple[Fraction, Fraction]]
    points_evaluated: int
    caveat: str = LATTICE_CAVEAT

    @property
    def minimizing_corner(self) -> tuple[Fraction, Fraction]:
        return self.min_location[0]

    def passes_lattice(self, threshold=CONJ2_FACTOR) -> dict[int, bool]:
        return {k: v > threshold for k, v in self.min_ratio.items()}

    def passes_corner(self) -> dict[int, bool]:
        # each k judged at its own minimizing corner
        out = {}
        for k, thr in CORNER_THRESHOLDS.items():
            worst = min(r[k] for r in self.corner_ratios.values())
            out[k] = worst > thr
        return out


def verify_conjecture2(d: StudyData, grid_n: int = 50) -> Conjecture2Report:
    if grid_n < 2:
        raise ValueError("grid_n must be at least 2")
    region = dep_binom_region(d)
    ind = indep_binom_model(d)
    c = competition(d, (ind,))
    ind_tests = {k: test_p(c, ind, k) for k in (0, 1, 2)}
    b = d.british
    corners = {}
    for pa, pb in region.corners():
        dist = cond_binom(pa, pb, b.lc, b.smokers, d.space)
        corners[(pa, pb)] = _binom_ratios(dist, ind_tests, d)
    best: dict[int, tuple[Fraction, tuple]] = {}
    count = 0
    for _, _, pa, pb in region.lattice(grid_n):
        dist = cond_binom(pa, pb, b.lc, b.smokers, d.space)
        count += 1
        for k, r in _binom_ratios(dist, ind_tests, d).items():
            # ties broken by location so the result does not depend on scan order
            if k not in best or (r, (pa, pb)) < (best[k][0], best[k][1]):
                best[k] = (r, (pa, pb))
    return Conjecture2Report(
        grid_n=grid_n,
        corner_ratios=corners,
        min_ratio={k: v[0] for k, v in sorted(best.items())},
        min_location={k: v[1] for k, v in sorted(best.items())},
        points_evaluated=count,
    )


# hypergeometric version ----------------------------------------------------


@dataclass(frozen=True)
class HyperScenario:
    lc_pop: int
    notlc_pop: int
    dep_smokers_lc: int
    dep_smokers_notlc: int
    indep_smokers_lc: int
    indep_smokers_notlc: int

    def as_dict(self) -> dict[str, int]:
        return {
            "lc_pop": self.lc_pop,
            "notlc_pop": self.notlc_pop,
            "dep_smokers_lc": self.dep_smokers_lc,
            "dep_smokers_notlc": self.dep_smokers_notlc,
            "indep_smokers_lc": self.indep_smokers_lc,
            "indep_smokers_notlc": self.indep_smokers_notlc,
        }


def scenario_violations(s: HyperScenario, d: StudyData) -> list[str]:
    """Names of the violated constraints; empty when the scenario is admissible."""
    bad = []
    b = d.british
    counts = (s.lc_pop, s.notlc_pop, s.dep_smokers_lc, s.dep_smokers_notlc, s.indep_smokers_lc,
              s.indep_smokers_notlc)
    if any(x < 0 for x in counts):
        return ["negative-count"]
    if s.lc_pop > LC_POP_MAX:
        bad.append("lc-pop-bound")
    if s.notlc_pop < NOTLC_MIN_FACTOR * s.lc_pop:
        bad.append("notlc-pop-ratio")
    if (s.dep_smokers_lc > s.lc_pop or s.indep_smokers_lc > s.lc_pop
            or s.dep_smokers_notlc > s.notlc_pop or s.indep_smokers_notlc > s.notlc_pop
            or b.lc > s.lc_pop or b.not_lc > s.notlc_pop):
        bad.append("definedness")
        return bad
    dep_other = Fraction(s.notlc_pop - s.dep_smokers_notlc, s.notlc_pop)
    dep_lc = Fraction(s.lc_pop - s.dep_smokers_lc, s.lc_pop)
    # written multiplicatively so a zero denominator rate cannot slip through
    if dep_other == 0 or dep_lc > nonsmoker_ratio_bound(d) * dep_other:
        bad.append("dep-nonsmoker-ratio")
    if dep_other < notlc_nonsmoker_floor(d):
        bad.append("dep-notlc-nonsmoker-floor")
    if Fraction(s.indep_smokers_notlc, s.notlc_pop) != Fraction(s.indep_smokers_lc, s.lc_pop):
        bad.append("indep-equal-rates")
    return bad


def hyper_scenario_valid(s: HyperScenario, d: StudyData) -> bool:
    return not scenario_violations(s, d)


def hyper_models(s: HyperScenario, d: StudyData, *, literal_second_factor: bool = False):
    """Both conditional-hypergeometric candidate models for a scenario.

    Only the distributions' own domain is enforced here; use
    :func:`hyper_scenario_valid` for the modelling assumptions.
    """
    b = d.british
    dep = cond_hyper(s.dep_smokers_lc, s.dep_smokers_notlc, s.lc_pop, s.notlc_pop, b.lc, b.not_lc,
                     b.smokers, d.space, literal_second_factor=literal_second_factor)
    ind = cond_hyper(s.indep_smokers_lc, s.indep_smokers_notlc, s.lc_pop, s.notlc_pop, b.lc, b.not_lc,
                     b.smokers, d.space, literal_second_factor=literal_second_factor)
    return CandidateModel("dependModel", dep, DEPEND_WARNING), CandidateModel("indepModel", ind, INDEP_WARNING)


def hyper_tests(s: HyperScenario, d: StudyData) -> tuple[dict[int, Fraction], dict[int, Fraction]]:
    dep, ind = hyper_models(s, d)
    c = competition(d, (dep, ind))
    return ({k: test_p(c, dep, k) for k in (0, 1, 2)}, {k: test_p(c, ind, k) for k in (0, 1, 2)})


def hyper_ratio(s: HyperScenario, k: int, d: StudyData | None = None) -> Fraction:
    d = d or StudyData()
    bad = scenario_violations(s, d)
    if bad:
        raise UndefinedParameters(f"scenario violates {', '.join(bad)}")
    if k not in (0, 1, 2):
        raise ValueError("k must be 0, 1 or 2")
    dep_t, ind_t = hyper_tests(s, d)
    if ind_t[k] == 0:
        raise ZeroDivisionError(f"indepModel puts no mass on the k={k} interval")
    return dep_t[k] / ind_t[k]


@dataclass
class Counterexample:
    scenario: HyperScenario
    k: int
    dep_test: Fraction
    indep_test: Fraction

    @property
    def ratio(self) -> Fraction | None:
        return None if self.indep_test == 0 else self.dep_test / self.indep_test


@dataclass
class HyperSearchReport:
    seed: int
    requested: int
    notlc_cap: int
    threshold: Fraction
    evaluated: int = 0
    attempts: int = 0
    skipped: dict[str, int] = field(default_factory=dict)
    min_ratio: dict[int, Fraction] = field(default_factory=dict)
    min_scenario: dict[int, HyperScenario] = field(default_factory=dict)
    counterexamples: list[Counterexample] = field(default_factory=list)
    violating_scenarios: int = 0
    normalization_ok: bool = True
    label: str = SEARCH_LABEL

    @property
    def falsified(self) -> bool:
        return self.violating_scenarios > 0


def sample_scenario(rng: np.random.Generator, d: StudyData, notlc_cap: int) -> HyperScenario:
    """One scenario drawn uniformly, coordinate by coordinate, from the admissible ranges.

    The order is lc_pop, notlc_pop, dependModel's non-LC nonsmokers (above
    the floor), its LC nonsmokers (below the ratio bound), then a common
    smoker frequency for indepModel chosen from those realisable exactly in
    both populations.
    """
    b = d.british
    n1 = int(rng.integers(b.lc, LC_POP_MAX + 1))
    lo2 = max(NOTLC_MIN_FACTOR * n1, b.not_lc)
    n2 = int(rng.integers(lo2, max(lo2, notlc_cap * n1) + 1))
    floor = notlc_nonsmoker_floor(d)
    m2_lo = math.ceil(floor * n2)
    m2 = int(rng.integers(m2_lo, n2 + 1))
    m1_hi = math.floor(nonsmoker_ratio_bound(d) * Fraction(m2, n2) * n1)
    m1 = int(rng.integers(0, m1_hi + 1))
    g = math.gcd(n1, n2)
    t = int(rng.integers(0, g + 1))
    return HyperScenario(n1, n2, n1 - m1, n2 - m2, t * (n1 // g), t * (n2 // g))


def search_conjecture1(
    d: StudyData | None = None,
    samples: int = 1000,
    seed: int = 0,
    notlc_cap: int = 20,
    threshold=CONJ1_FACTOR,
    max_attempts: int | None = None,
    keep_counterexamples: int = 5,
) -> HyperSearchReport:
    """Seeded search for admissible scenarios where dependModel fails to win by ``threshold``.

    Scenarios whose models are degenerate (no mass on the outcome space) are
    skipped and counted.
    Random numbers come from numpy's PCG64 generator seeded with ``seed``.
    """
    d = d or StudyData()
    if samples <= 0 or notlc_cap < NOTLC_MIN_FACTOR:
        raise ValueError("samples must be positive and notlc_cap at least 5")
    threshold = as_rational(threshold)
    rng = np.random.Generator(np.random.PCG64(seed))
    rep = HyperSearchReport(seed=seed, requested=samples, notlc_cap=notlc_cap, threshold=threshold)
    limit = max_attempts if max_attempts is not None else 50 * samples
    while rep.evaluated < samples:
        if rep.attempts >= limit:
            raise RuntimeError(f"attempt budget {limit} exhausted after {rep.evaluated} scenarios")
        rep.attempts += 1
        s = sample_scenario(rng, d, notlc_cap)
        bad = scenario_violations(s, d)
        if bad:
            # the sampler stays inside the region, so this indicates a bug
            raise AssertionError(f"sampler produced an inadmissible scenario: {bad}")
        try:
            dep, ind = hyper_models(s, d)
        except DegenerateDistribution:
            rep.skipped["degenerate"] = rep.skipped.get("degenerate", 0) + 1
            continue
        if sum(dep.distribution.mass.values()) != 1 or sum(ind.distribution.mass.values()) != 1:
            rep.normalization_ok = False
        c = competition(d, (dep, ind))
        dep_t = {k: test_p(c, dep, k) for k in (0, 1, 2)}
        ind_t = {k: test_p(c, ind, k) for k in (0, 1, 2)}
        rep.evaluated += 1
        bad_k = []
        for k in (0, 1, 2):
            # a zero indepModel score makes the ratio infinite; only the comparison matters then
            if ind_t[k]:
                r = dep_t[k] / ind_t[k]
                if k not in rep.min_ratio or r < rep.min_ratio[k]:
                    rep.min_ratio[k] = r
                    rep.min_scenario[k] = s
            if not dep_t[k] > threshold * ind_t[k]:
                bad_k.append(k)
        if bad_k:
            rep.violating_scenarios += 1
            if len(rep.counterexamples) < keep_counterexamples:
                k = bad_k[0]
                rep.counterexamples.append(Counterexample(s, k, dep_t[k], ind_t[k]))
    return rep


# report claims ----------------------------------------------------------------

IDENTITY_PS = (Fraction(1, 3), Fraction(1, 2), Fraction(9, 10))


def verify_smoking_binom(d: StudyData | None = None, grid_n: int = 50) -> CaseResult:
    d = d or StudyData()
    b = d.british
    claims = []
    r_lc, r_other = american_nonsmoker_rates(d)
    claims.append(Claim("smoking.american_rates", status_of((r_lc, r_other) == (Fraction(8, 605), Fraction(114, 780)),
                                                            refutes=False),
                        r_lc, "nonsmoker rates 8/605 and 114/780", {"lc": r_lc, "other": r_other}))
    claims.append(Claim("smoking.nonsmoker_ratio_bound", PASS, nonsmoker_ratio_bound(d), "about .27142"))
    claims.append(Claim("smoking.notlc_nonsmoker_floor", PASS, notlc_nonsmoker_floor(d), "about .048718"))

    ind = indep_binom_model(d)
    same = all(cond_binom(p, p, b.lc, b.smokers, d.space) == ind.distribution for p in IDENTITY_PS)
    claims.append(Claim("smoking.condbinom_identity", status_of(same, refutes=False), None,
                        "equal-rate conditional binomial equals the closed form for every outcome",
                        {"p_values": list(IDENTITY_PS)}))
    lo, hi = b.smokers - b.not_lc, b.lc
    claims.append(Claim("smoking.closed_form_support", status_of((lo, hi) == (d.space.min, d.space.max),
                                                                 refutes=False),
                        None, "closed-form support is 620..649", {"min": lo, "max": hi}))

    region = dep_binom_region(d)
    corner = (region.p_lc_range[0], region.p_notlc_range[1])
    rep = verify_conjecture2(d, grid_n)
    at = rep.corner_ratios[corner]
    for k, thr in CORNER_THRESHOLDS.items():
        claims.append(Claim(f"smoking.corner_k{k}", status_of(at[k] > thr), at[k],
                            f"more than {thr} times higher at the corner",
                            {"corner": list(corner), "threshold": thr}))
    passes = rep.passes_lattice()
    for k in (0, 1, 2):
        claims.append(Claim(f"smoking.lattice_k{k}", status_of(passes[k]), rep.min_ratio[k],
                            f"every lattice point exceeds {CONJ2_FACTOR}",
                            {"grid_n": grid_n, "min_location": list(rep.min_location[k]),
                             "points": rep.points_evaluated, "caveat": rep.caveat}))
    loc_ok = all(rep.min_location[k] == corner for k in (0, 1, 2))
    claims.append(Claim("smoking.lattice_argmin", status_of(loc_ok), None,
                        "minimized at p_LC minimal and p_notLC maximal",
                        {"min_location": {k: list(v) for k, v in rep.min_location.items()}}))

    dep = dep_binom_model(*corner, d)
    c = competition(d, (dep, ind))
    warns = required_warnings(c)
    claims.append(Claim("smoking.beats_all", status_of(beats_all(c, dep) and warns == [DEPEND_WARNING]), None,
                        "dependModel beats indepModel, so its warning is required at the corner",
                        {"required_warnings": warns, "factor": c.factor}))
    data = {"american": asdict(d.american), "british": asdict(d.british),
            "region": {"p_lc": list(region.p_lc_range), "p_notlc": list(region.p_notlc_range)}}
    return CaseResult(claims, data)


def verify_smoking_hyper(d: StudyData | None = None, samples: int = 1000, seed: int = 0,
                         notlc_cap: int = 20) -> CaseResult:
    d = d or StudyData()
    rep = search_conjecture1(d, samples=samples, seed=seed, notlc_cap=notlc_cap)
    claims = []
    common = {"label": rep.label, "seed": seed, "evaluated": rep.evaluated, "attempts": rep.attempts,
              "skipped": rep.skipped, "generator": "numpy PCG64"}
    for k in (0, 1, 2):
        bad = [cx for cx in rep.counterexamples if cx.k == k]
        ok = k in rep.min_ratio and rep.min_ratio[k] > rep.threshold and not bad
        claims.append(Claim(f"smoking.hyper_k{k}", status_of(ok), rep.min_ratio.get(k),
                            f"no sampled scenario has ratio at most {rep.threshold}",
                            {**common, "min_scenario": rep.min_scenario.get(k)}))
    claims.append(Claim("smoking.hyper_search", status_of(not rep.falsified), None,
                        f"dependModel beats indepModel by {rep.threshold} in every sampled scenario",
                        {**common, "violating_scenarios": rep.violating_scenarios,
                         "counterexamples": [{"scenario": cx.scenario, "k": cx.k, "dep_test": cx.dep_test,
                                              "indep_test": cx.indep_test} for cx in rep.counterexamples]}))
    claims.append(Claim("smoking.hyper_normalization", status_of(rep.normalization_ok, refutes=False), None,
                        "every sampled distribution sums to 1"))
    return CaseResult(claims, {"notlc_cap": notlc_cap, "threshold": rep.threshold})
