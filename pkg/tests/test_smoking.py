from fractions import Fraction as F

import numpy as np
import pytest

from argulab import comparison as cmp
from argulab.distributions import UndefinedParameters, cond_binom
from argulab.smoking import (
    DEPEND_WARNING,
    HyperScenario,
    StudyData,
    american_nonsmoker_rates,
    binom_ratio,
    competition,
    dep_binom_model,
    dep_binom_region,
    hyper_models,
    hyper_tests,
    hyper_ratio,
    hyper_scenario_valid,
    indep_binom_model,
    nonsmoker_ratio_bound,
    notlc_nonsmoker_floor,
    sample_scenario,
    scenario_violations,
    search_conjecture1,
    verify_conjecture2,
)

D = StudyData()
CORNER = (F(589, 605), F(723, 780))


def float_cond_binom(p1, p2, n, total, outcomes):
    # log-space float recomputation, used as a loose oracle
    from math import lgamma, log, exp

    def lc(a, b):
        return lgamma(a + 1) - lgamma(b + 1) - lgamma(a - b + 1)

    logs = [lc(n, a) + a * log(p1) + (n - a) * log(1 - p1) + lc(n, total - a) + (total - a) * log(p2)
            + (n - total + a) * log(1 - p2) for a in outcomes]
    m = max(logs)
    w = [exp(x - m) for x in logs]
    return [x / sum(w) for x in w]


class TestStudyData:
    def test_space(self):
        assert (D.space.min, D.space.max) == (620, 649)
        assert D.true_outcome == 647

    def test_rates(self):
        r_lc, r_other = american_nonsmoker_rates(D)
        assert (r_lc, r_other) == (F(8, 605), F(114, 780))
        assert abs(float(r_lc) - 0.0132231) < 1e-7
        assert abs(float(r_other) - 0.146154) < 1e-6

    def test_footnote_constants(self):
        assert abs(float(nonsmoker_ratio_bound(D)) - 0.27142) < 1e-5
        assert abs(float(notlc_nonsmoker_floor(D)) - 0.048718) < 1e-6

    def test_inconsistent_smokers_rejected(self):
        from argulab.smoking import BritishStudy

        with pytest.raises(ValueError):
            StudyData(british=BritishStudy(lc_and_smokers=648))


class TestBinomRegion:
    def test_endpoints(self):
        r = dep_binom_region(D)
        assert r.p_lc_range == (F(589, 605), 1 - F(4, 605))
        assert r.p_notlc_range == (1 - F(228, 780), F(723, 780))

    def test_inside_unit_interval(self):
        r = dep_binom_region(D)
        assert 0 < r.p_lc_range[0] < r.p_lc_range[1] < 1

    def test_out_of_region_model_rejected(self):
        with pytest.raises(ValueError):
            dep_binom_model(F(1, 2), F(1, 2), D)


class TestBinomModels:
    def test_corner_distribution_normalized(self):
        m = dep_binom_model(*CORNER, D)
        assert sum(m.distribution.mass.values()) == 1
        assert m.product_warning == DEPEND_WARNING

    @pytest.mark.parametrize("p", [F(1, 2), F(9, 10)])
    def test_indep_equals_equal_rates(self, p):
        ind = indep_binom_model(D)
        assert ind.distribution == cond_binom(p, p, 649, 1269, D.space)
        assert ind.product_warning == ""

    def test_equal_rate_dep_model_is_indep(self):
        m = dep_binom_model(F(1, 2), F(1, 2), D, check_region=False)
        assert m.distribution == indep_binom_model(D).distribution

    def test_float_oracle_and_mode_shift(self):
        outcomes = list(D.space)
        modes = {}
        for corner in dep_binom_region(D).corners():
            m = dep_binom_model(*corner, D)
            approx = float_cond_binom(float(corner[0]), float(corner[1]), 649, 1269, outcomes)
            exact = [float(m.distribution[a]) for a in outcomes]
            assert np.allclose(exact, approx, rtol=1e-9, atol=1e-300)
            modes[corner] = outcomes[int(np.argmax(exact))]
        # raising p_LC and lowering p_notLC moves mass up toward the observed 647
        r = dep_binom_region(D)
        hi = modes[(r.p_lc_range[1], r.p_notlc_range[0])]
        lo = modes[CORNER]
        assert lo < hi
        assert abs(hi - 647) <= 2

    def test_scores_in_unit_interval(self):
        dep, ind = dep_binom_model(*CORNER, D), indep_binom_model(D)
        c = competition(D, (dep, ind))
        for m in (dep, ind):
            for k in (0, 1, 2):
                assert 0 < cmp.test_p(c, m, k) <= 1


class TestConjecture2:
    @pytest.mark.parametrize("k,threshold", [(0, 12000), (1, 5000), (2, 2000)])
    def test_corner(self, k, threshold):
        assert binom_ratio(k, *CORNER, D) > threshold

    def test_ratio_exact_symmetry(self):
        r = binom_ratio(1, *CORNER, D)
        dep, ind = dep_binom_model(*CORNER, D), indep_binom_model(D)
        c = competition(D, (dep, ind))
        assert r == 1 / (cmp.test_p(c, ind, 1) / cmp.test_p(c, dep, 1))

    def test_grid_2_passes(self):
        rep = verify_conjecture2(D, 2)
        assert all(rep.passes_lattice().values())
        assert all(rep.passes_corner().values())
        assert rep.points_evaluated == 4

    @pytest.mark.parametrize("n", [2, 3, 6])
    def test_argmin_corner_stable(self, n):
        rep = verify_conjecture2(D, n)
        assert all(loc == CORNER for loc in rep.min_location.values())

    def test_interior_points_exceed_corner(self):
        r = dep_binom_region(D)
        mid = (sum(r.p_lc_range) / 2, sum(r.p_notlc_range) / 2)
        for k in (0, 1, 2):
            assert binom_ratio(k, *mid, D) >= binom_ratio(k, *CORNER, D)

    def test_deterministic(self):
        a, b = verify_conjecture2(D, 3), verify_conjecture2(D, 3)
        assert a == b

    def test_bad_grid(self):
        with pytest.raises(ValueError):
            verify_conjecture2(D, 1)

    def test_dep_beats_indep(self):
        dep, ind = dep_binom_model(*CORNER, D), indep_binom_model(D)
        c = competition(D, (dep, ind))
        assert cmp.beats_all(c, dep)
        assert cmp.required_warnings(c) == [DEPEND_WARNING]


def valid_scenario(**kw):
    base = dict(lc_pop=600, notlc_pop=3000, dep_smokers_lc=590, dep_smokers_notlc=2500,
                indep_smokers_lc=300, indep_smokers_notlc=1500)
    base.update(kw)
    return HyperScenario(**base)


class TestScenarios:
    def test_lc_pop_bound(self):
        s = valid_scenario(lc_pop=7001, notlc_pop=40000, dep_smokers_lc=6990, dep_smokers_notlc=35000,
                           indep_smokers_lc=7001, indep_smokers_notlc=40000)
        assert "lc-pop-bound" in scenario_violations(s, D)

    def test_equal_indep_rates(self):
        # lc_pop below the sample size is a definedness problem, not an Assumption-5 one
        s = valid_scenario(lc_pop=700, notlc_pop=3500, dep_smokers_lc=690, indep_smokers_lc=350,
                           indep_smokers_notlc=1750)
        assert "indep-equal-rates" not in scenario_violations(s, D)
        s2 = valid_scenario(lc_pop=700, notlc_pop=3500, dep_smokers_lc=690, indep_smokers_lc=350,
                            indep_smokers_notlc=1751)
        assert "indep-equal-rates" in scenario_violations(s2, D)

    def test_ratio_boundary_is_accepted(self):
        # nonsmoker fraction among LC exactly at the bound times the non-LC fraction
        bound = nonsmoker_ratio_bound(D)
        assert bound == F(624, 2299)
        n1, n2 = 3 * 2299, 18 * 2299
        m2 = n2 // 2
        m1 = bound * F(m2, n2) * n1
        assert m1 == 936
        s = HyperScenario(n1, n2, n1 - 936, n2 - m2, n1 // 3, n2 // 3)
        assert scenario_violations(s, D) == []
        s_over = HyperScenario(n1, n2, n1 - 937, n2 - m2, n1 // 3, n2 // 3)
        assert "dep-nonsmoker-ratio" in scenario_violations(s_over, D)

    def test_sampler_stays_admissible(self):
        rng = np.random.Generator(np.random.PCG64(7))
        for _ in range(200):
            assert hyper_scenario_valid(sample_scenario(rng, D, 20), D)

    def test_hyper_ratio_requires_valid(self):
        with pytest.raises(UndefinedParameters):
            hyper_ratio(valid_scenario(lc_pop=7001), 0, D)


class TestHyper:
    # the binomial corner breaks the hypergeometric nonsmoker-ratio bound, so compare at the
    # American rates themselves, which satisfy both sets of assumptions
    P = (F(597, 605), F(666, 780))

    def big_binomial_like(self):
        n1, n2 = 6050, 78000
        s = HyperScenario(n1, n2, n1 * 597 // 605, n2 * 666 // 780, n1 // 2, n2 // 2)
        assert hyper_scenario_valid(s, D)
        return s

    def test_ratio_positive(self):
        s = self.big_binomial_like()
        for k in (0, 1, 2):
            assert hyper_ratio(s, k, D) > 0

    def test_close_to_binomial(self):
        # populations far beyond the 7000 bound, so only the distributions' own domain applies
        n1, n2 = 605 * 1000, 780 * 1000
        s = HyperScenario(n1, n2, 597 * 1000, 666 * 1000, n1 // 2, n2 // 2)
        dep_t, ind_t = hyper_tests(s, D)
        for k in (0, 1, 2):
            assert abs(dep_t[k] / ind_t[k] / binom_ratio(k, *self.P, D) - 1) < F(1, 5)

    def test_bounded_populations_are_not_binomial(self):
        # at the admissible sizes the finite-population effect is large
        s = self.big_binomial_like()
        assert hyper_ratio(s, 0, D) > 5 * binom_ratio(0, *self.P, D)

    def test_models_normalized(self):
        dep, ind = hyper_models(self.big_binomial_like(), D)
        assert sum(dep.distribution.mass.values()) == 1
        assert sum(ind.distribution.mass.values()) == 1

    def test_known_counterexample(self):
        # LC nonsmokers pushed to almost zero concentrate dependModel at 649
        s = HyperScenario(6969, 97959, 6940, 4757, 2323, 32653)
        assert hyper_scenario_valid(s, D)
        assert hyper_ratio(s, 0, D) < 5000

    def test_small_search_reproducible(self):
        a = search_conjecture1(D, samples=20, seed=3)
        b = search_conjecture1(D, samples=20, seed=3)
        assert a == b
        assert a.evaluated == 20
        assert a.normalization_ok
        assert "not a proof" in a.label

    def test_search_bad_arguments(self):
        with pytest.raises(ValueError):
            search_conjecture1(D, samples=0)
        with pytest.raises(ValueError):
            search_conjecture1(D, samples=5, notlc_cap=4)
