"""Checks of the hair-evidence claims, assembled into report claims."""
from __future__ import annotations

import math
from fractions import Fraction

from ..ratmath import as_rational
from ..report import CaseResult, Claim, render_decimal, status_of
from .likelihood import (BETA_DEFAULT, HairData, HayModel, alpha_bound, argmax, fixed_min_scan,
                         likelihood_ratio, thin_interval_scan)
from .region import monte_carlo_hits, region_4bin, region_5bin, shape_mask_5bin

__all__ = ["verify_hay_claims", "verify_hay_5bin", "scan_csv"]

F = Fraction
MAIN_ALPHA_MIN = F(849, 1000)
MAIN_BOUND = F(997, 1000)
RESPONSE_ALPHA_MIN = F(835, 1000)
MONOTONE_GRID = (F(1, 2), F(3, 5), F(7, 10), F(4, 5))
ALPHA_MAX_GRID = (F(17, 20), F(9, 10), F(19, 20), F(1))
PEAK_RATIO, PEAK_RATIO_TOL = F(127, 100), F(2, 100)
PEAK_ALPHA, PEAK_ALPHA_TOL = F(935, 1000), F(1, 100)
EVIDENCE_RATIO = 15
RESPONSE_EVIDENCE_RATIO = F(139, 10)
BOUND_DECIMAL, BOUND_TOL = F(84507, 100000), F(1, 10**5)
FIVE_BIN_MEAN_BOUND = F(57, 1000)
THRESHOLD_NOTE = (
    "the criticism response speaks of changing .85 in the main claim, which states .849; "
    "the checked thresholds are .849 for four bins and .835 for five bins"
)


def scan_csv(header: str, rows) -> str:
    lines = [header]
    lines += [f"{render_decimal(a)},{render_decimal(r)}" for a, r in rows]
    return "\n".join(lines) + "\n"


def verify_hay_claims(d: HairData | None = None, grid_step=F(1, 1000)) -> CaseResult:
    d = d or HairData()
    grid_step = as_rational(grid_step)
    if not 0 < grid_step <= F(1, 10):
        raise ValueError("grid_step must lie in (0, 1/10]")
    region = region_4bin()
    h = HayModel(MAIN_ALPHA_MIN, 1, region)
    claims = []

    vols = region.cell_volumes()
    claims.append(Claim("hay.cell_volumes", status_of(all(v == F(1, 144) for v in vols), refutes=False),
                        vols[0], "each of the four cells has volume 1/144", {"cells": vols}))
    vol = region.volume()
    claims.append(Claim("hay.region_volume", status_of(vol == F(1, 36) and sum(vols) == vol, refutes=False),
                        vol, "total volume 1/36", {"sum_of_cells": sum(vols)}))
    m1 = region.mean(0)
    claims.append(Claim("hay.mean_p1", status_of(m1 == F(1, 16), refutes=False), m1,
                        "mean of p1 over the region is 0.0625"))

    lr = likelihood_ratio(h, d)
    claims.append(Claim("hay.lr_main", status_of(lr < MAIN_BOUND), lr,
                        "likelihood ratio at (.849, 1) is below .997",
                        {"alpha_min": MAIN_ALPHA_MIN, "alpha_max": F(1), "bound": MAIN_BOUND,
                         "note": THRESHOLD_NOTE}))

    mono = [likelihood_ratio(h.with_interval(a, 1), d) for a in MONOTONE_GRID]
    inc = all(x < y for x, y in zip(mono, mono[1:])) and mono[-1] < lr
    claims.append(Claim("hay.monotone_alpha_min", status_of(inc), mono[-1],
                        "ratio with alpha_max = 1 increases with alpha_min up to .849 (grid check)",
                        {"alpha_min": list(MONOTONE_GRID), "ratio": mono, "reference_849": lr}))

    amax = [likelihood_ratio(h.with_interval(F(4, 5), a), d) for a in ALPHA_MAX_GRID]
    best = max(range(len(amax)), key=lambda i: amax[i])
    claims.append(Claim("hay.alpha_max_grid", status_of(ALPHA_MAX_GRID[best] == 1), amax[best],
                        "with alpha_min = .8 the ratio is maximized at alpha_max = 1 (grid check)",
                        {"alpha_max": list(ALPHA_MAX_GRID), "ratio": amax}))

    thin = thin_interval_scan(h, d, grid_step)
    a_star, r_star = argmax(thin)
    ok = abs(r_star - PEAK_RATIO) <= PEAK_RATIO_TOL and abs(a_star - PEAK_ALPHA) <= PEAK_ALPHA_TOL
    claims.append(Claim("hay.thin_scan_peak", status_of(ok, refutes=False), r_star,
                        "thin-interval ratio peaks near 1.27 around alpha .935",
                        {"argmax_alpha": a_star, "grid_step": grid_step, "points": len(thin)}))

    fixed = fixed_min_scan(h, d, MAIN_ALPHA_MIN, grid_step)
    b_star, rb = argmax(fixed)
    claims.append(Claim("hay.fixed_min_scan", status_of(b_star == 1), rb,
                        "with alpha_min = .849 the ratio is maximized at alpha_max = 1, value about .996",
                        {"argmax_alpha_max": b_star, "points": len(fixed)}))

    ab = alpha_bound(EVIDENCE_RATIO, BETA_DEFAULT)
    claims.append(Claim("hay.alpha_bound", status_of(ab == F(60, 71) and abs(ab - BOUND_DECIMAL) <= BOUND_TOL,
                                                     refutes=False),
                        ab, "alpha <= 0.84507 from ratio 15 and beta 4/11"))
    ab2 = alpha_bound(RESPONSE_EVIDENCE_RATIO, BETA_DEFAULT)
    claims.append(Claim("hay.alpha_bound_response", status_of(ab2 <= RESPONSE_ALPHA_MIN, refutes=False), ab2,
                        "ratio 13.9 keeps alpha at or below .835"))

    lr5 = likelihood_ratio(HayModel(RESPONSE_ALPHA_MIN, 1, region_5bin()), d.with_open_top_bin())
    claims.append(Claim("hay.lr_5bin_response", status_of(lr5 < 1), lr5,
                        "five-bin ratio at (.835, 1) is below 1", {"note": THRESHOLD_NOTE}))

    return CaseResult(
        claims,
        data={"news_counts": list(d.news_counts), "scalp_pmf": list(d.scalp_pmf()), "beta": BETA_DEFAULT},
        artifacts={
            "hay_thin_interval.csv": scan_csv("alpha,ratio", thin),
            "hay_fixed_alpha_min.csv": scan_csv("alpha_max,ratio", fixed),
        },
    )


def verify_hay_5bin(d: HairData | None = None, mc_samples: int = 10**6, seed: int = 0) -> CaseResult:
    d5 = (d or HairData()).with_open_top_bin()
    region = region_5bin()
    claims = []
    m1 = region.mean(0)
    claims.append(Claim("hay5.mean_p1", status_of(m1 < FIVE_BIN_MEAN_BOUND, refutes=False), m1,
                        "mean of p1 over the five-bin region is below .057"))
    lr = likelihood_ratio(HayModel(RESPONSE_ALPHA_MIN, 1, region), d5)
    claims.append(Claim("hay5.lr_response", status_of(lr < 1), lr, "ratio at (.835, 1) is below 1",
                        {"note": THRESHOLD_NOTE}))

    hits = monte_carlo_hits(region.bins, shape_mask_5bin, mc_samples, seed)
    frac = F(hits, mc_samples)
    expected = F(len(region.cells), math.factorial(region.bins))
    # binomial standard error of the hit fraction, compared squared to stay exact
    ok = (frac - expected) ** 2 <= 9 * expected * (1 - expected) / mc_samples
    simplex = F(1, math.factorial(region.bins - 1))
    claims.append(Claim("hay5.mc_volume", status_of(ok, refutes=False), frac * simplex,
                        "Monte-Carlo volume within 3 standard errors of the exact volume",
                        {"exact_volume": region.volume(), "hits": hits, "samples": mc_samples, "seed": seed,
                         "generator": "numpy PCG64"}))

    variants = {}
    for name, kw in (("free_tail", {"tail_below_middle": False}), ("any_shape", {"unimodal": False}),
                     ("free_tail_any_shape", {"tail_below_middle": False, "unimodal": False})):
        r = region_5bin(**kw)
        variants[name] = {"cells": len(r.cells), "volume": r.volume(), "mean_p1": r.mean(0)}
        if name == "free_tail":
            # the only variant that meets the .057 figure; its ratio shows the response still holds
            variants[name]["lr_response"] = likelihood_ratio(HayModel(RESPONSE_ALPHA_MIN, 1, r), d5)
    data = {"cells": len(region.cells), "volume": region.volume(), "variants": variants}
    return CaseResult(claims, data)
