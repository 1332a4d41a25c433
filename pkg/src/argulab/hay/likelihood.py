"""Likelihoods of the newspaper hair widths under the defense and prosecution models."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, lcm
from typing import Sequence

from ..ratmath import SparsePoly, as_rational, poly_eval, poly_integrate
from .region import PriorRegion, mixture_factor, monomial_factor, ordered_simplex_integral, region_4bin

__all__ = [
    "HairData",
    "HayModel",
    "alpha_polynomial",
    "defense_likelihood",
    "prosecution_likelihood_at",
    "prosecution_likelihood",
    "likelihood_ratio",
    "alpha_bound",
    "thin_interval_scan",
    "fixed_min_scan",
    "BETA_DEFAULT",
    "THIN_WIDTH",
]

BETA_DEFAULT = Fraction(4, 11)
THIN_WIDTH = Fraction(1, 10**6)
ALPHA = "alpha"


@dataclass(frozen=True)
class HairData:
    news_counts: tuple[int, ...] = (10, 20, 40, 19)
    # None as the last edge means the top bin is unbounded
    news_edges: tuple[Fraction | None, ...] = tuple(Fraction(x) for x in ("0", "112.5", "137.5", "162.5", "187.5"))
    scalp_counts: tuple[int, ...] = (3, 28, 41, 17, 1)
    scalp_edges: tuple[Fraction, ...] = tuple(
        Fraction(x) for x in ("12.5", "37.5", "62.5", "87.5", "112.5", "137.5"))

    def __post_init__(self):
        if len(self.news_edges) != len(self.news_counts) + 1:
            raise ValueError("need one more news edge than news bins")
        if len(self.scalp_edges) != len(self.scalp_counts) + 1:
            raise ValueError("need one more scalp edge than scalp bins")
        if sum(self.scalp_counts) == 0:
            raise ValueError("no scalp measurements")

    @property
    def bins(self) -> int:
        return len(self.news_counts)

    @property
    def news_total(self) -> int:
        return sum(self.news_counts)

    @property
    def scalp_total(self) -> int:
        return sum(self.scalp_counts)

    def scalp_pmf(self) -> tuple[Fraction, ...]:
        """Maximum-likelihood scalp distribution over the newspaper bins.

        Each scalp-table bin must sit inside one newspaper bin; the MLE is
        the empirical frequency of the pooled counts.
        """
        pooled = [0] * self.bins
        for c, lo, hi in zip(self.scalp_counts, self.scalp_edges, self.scalp_edges[1:]):
            for b in range(self.bins):
                top = self.news_edges[b + 1]
                if self.news_edges[b] <= lo and (top is None or hi <= top):
                    pooled[b] += c
                    break
            else:
                raise ValueError(f"scalp bin ({lo}, {hi}] straddles newspaper bins")
        return tuple(Fraction(c, self.scalp_total) for c in pooled)

    def with_open_top_bin(self) -> "HairData":
        """Add a bin for widths above the last edge; no newspaper hair falls in it."""
        return HairData(self.news_counts + (0,), self.news_edges + (None,), self.scalp_counts, self.scalp_edges)


@dataclass(frozen=True)
class HayModel:
    alpha_min: Fraction
    alpha_max: Fraction
    region: PriorRegion = field(default_factory=region_4bin)
    scalp_pmf: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        a0, a1 = as_rational(self.alpha_min), as_rational(self.alpha_max)
        object.__setattr__(self, "alpha_min", a0)
        object.__setattr__(self, "alpha_max", a1)
        # alpha_max = 1 is admitted: the pure-beard endpoint is where the checked claims live
        if not 0 < a0 < a1 <= 1:
            raise ValueError(f"need 0 < alpha_min < alpha_max <= 1, got ({a0}, {a1})")
        if self.scalp_pmf is not None:
            pmf = tuple(as_rational(x) for x in self.scalp_pmf)
            if sum(pmf) != 1 or any(x < 0 for x in pmf):
                raise ValueError("scalp pmf must be a probability vector")
            if len(pmf) != self.region.bins:
                raise ValueError("scalp pmf length differs from the number of bins")
            object.__setattr__(self, "scalp_pmf", pmf)

    def scalp(self, d: HairData) -> tuple[Fraction, ...]:
        return self.scalp_pmf if self.scalp_pmf is not None else d.scalp_pmf()

    def with_interval(self, alpha_min, alpha_max) -> "HayModel":
        return HayModel(alpha_min, alpha_max, self.region, self.scalp_pmf)


def _check_bins(h: HayModel, d: HairData) -> None:
    if h.region.bins != d.bins:
        raise ValueError(f"region has {h.region.bins} bins but the data has {d.bins}")


def mixture_pmf(p: Sequence, alpha, scalp: Sequence) -> tuple[Fraction, ...]:
    """Newspaper-hair bin probabilities: alpha * beard + (1 - alpha) * scalp."""
    alpha = as_rational(alpha)
    return tuple(alpha * as_rational(x) + (1 - alpha) * as_rational(s) for x, s in zip(p, scalp))


def defense_integrand(counts: Sequence[int]) -> SparsePoly:
    """prod p_b^(n_b) with the last bin written as 1 - (sum of the others)."""
    n = len(counts)
    vs = tuple(f"p{i + 1}" for i in range(n))
    head = SparsePoly(vs, {tuple(list(counts[:-1]) + [0]): 1})
    last = SparsePoly.linear({v: -1 for v in vs[:-1]}, 1, vs)
    return head * last ** counts[-1]


def prosecution_integrand(counts: Sequence[int], scalp: Sequence, alpha) -> SparsePoly:
    """prod (alpha p_b + (1 - alpha) s_b)^(n_b) on the simplex, for a fixed alpha."""
    n = len(counts)
    alpha = as_rational(alpha)
    vs = tuple(f"p{i + 1}" for i in range(n))
    out = SparsePoly.constant(1, vs)
    for i, (c, s) in enumerate(zip(counts, scalp)):
        if i < n - 1:
            mass = SparsePoly.var(vs[i], vs)
        else:
            mass = SparsePoly.linear({v: -1 for v in vs[:-1]}, 1, vs)
        out = out * (mass.scale(alpha) + (1 - alpha) * as_rational(s)) ** c
    return out


@lru_cache(maxsize=32)
def _defense_cached(key: tuple, counts: tuple[int, ...], region: PriorRegion) -> Fraction:
    return region.moment(counts) / region.volume()


def defense_likelihood(h: HayModel, d: HairData) -> Fraction:
    """Average over the prior region of prod p_b^(n_b)."""
    _check_bins(h, d)
    return _defense_cached(h.region.key, tuple(d.news_counts), h.region)


@lru_cache(maxsize=32)
def _alpha_poly_cached(key: tuple, counts: tuple[int, ...], scalp: tuple[Fraction, ...],
                       region: PriorRegion) -> SparsePoly:
    # alpha^N prod (p_b + beta s_b)^(n_b) with beta = (1 - alpha) / alpha
    factors = [mixture_factor(c, s) for c, s in zip(counts, scalp)]
    q: dict[int, Fraction] = {}
    for cell in region.cells:
        for r, v in ordered_simplex_integral(cell.order, factors).items():
            q[r] = q.get(r, 0) + v
    vol = region.volume()
    total = sum(counts)
    coeffs = [Fraction(0)] * (total + 1)
    for r, v in q.items():
        # alpha^(N-r) (1-alpha)^r
        for i in range(r + 1):
            coeffs[total - r + i] += v * comb(r, i) * (-1) ** i / vol
    return SparsePoly((ALPHA,), {(k,): c for k, c in enumerate(coeffs) if c})


def alpha_polynomial(h: HayModel, d: HairData) -> SparsePoly:
    """Prosecution likelihood at fixed alpha, as an exact polynomial in ``alpha``."""
    _check_bins(h, d)
    return _alpha_poly_cached(h.region.key, tuple(d.news_counts), tuple(h.scalp(d)), h.region)


def prosecution_likelihood_at(alpha, h: HayModel, d: HairData) -> Fraction:
    alpha = as_rational(alpha)
    if not 0 <= alpha <= 1:
        raise ValueError("alpha must lie in [0, 1]")
    return poly_eval(alpha_polynomial(h, d), {ALPHA: alpha})


def prosecution_likelihood(h: HayModel, d: HairData) -> Fraction:
    """Prosecution likelihood with alpha uniform on [alpha_min, alpha_max]."""
    p = alpha_polynomial(h, d)
    integral = poly_integrate(p, ALPHA, h.alpha_min, h.alpha_max).constant_value()
    return integral / (h.alpha_max - h.alpha_min)


def likelihood_ratio(h: HayModel, d: HairData) -> Fraction:
    den = defense_likelihood(h, d)
    if den == 0:
        raise ZeroDivisionError("defense likelihood is zero")
    return prosecution_likelihood(h, d) / den


def alpha_bound(evidence_ratio, beard_scalp_ratio=BETA_DEFAULT) -> Fraction:
    """Largest alpha with alpha / (1 - alpha) <= evidence_ratio * beard_scalp_ratio."""
    r, b = as_rational(evidence_ratio), as_rational(beard_scalp_ratio)
    if r <= 0 or b <= 0:
        raise ValueError("both ratios must be positive")
    x = r * b
    return x / (1 + x)


class _Antiderivative:
    """Exact evaluation of an integer-scaled antiderivative at many rational points."""

    def __init__(self, p: SparsePoly):
        coeffs = {e[0] + 1: c / (e[0] + 1) for e, c in p.terms.items()}
        self.degree = max(coeffs) if coeffs else 0
        self.scale = lcm(*(c.denominator for c in coeffs.values())) if coeffs else 1
        self.ints = [0] * (self.degree + 1)
        for k, c in coeffs.items():
            self.ints[k] = c.numerator * (self.scale // c.denominator)

    def __call__(self, x: Fraction) -> Fraction:
        a, b = x.numerator, x.denominator
        acc = 0
        bp = 1
        # sum C_k a^k b^(deg-k), Horner in a with powers of b accumulated
        for k in range(self.degree, -1, -1):
            acc = acc * a + self.ints[k] * bp
            bp *= b
        return Fraction(acc, self.scale * b**self.degree)


def _grid(step: Fraction, lo: Fraction, hi: Fraction) -> list[Fraction]:
    out = []
    i = 1
    while lo + i * step <= hi:
        out.append(lo + i * step)
        i += 1
    return out


def thin_interval_scan(h: HayModel, d: HairData, step=Fraction(1, 1000),
                       width=THIN_WIDTH) -> list[tuple[Fraction, Fraction]]:
    """Likelihood ratio on [a, a + width] for a on the step grid inside (0, 1)."""
    step, width = as_rational(step), as_rational(width)
    anti = _Antiderivative(alpha_polynomial(h, d))
    den = defense_likelihood(h, d)
    pts = [a for a in _grid(step, Fraction(0), Fraction(1)) if a + width <= 1]
    return [(a, (anti(a + width) - anti(a)) / (width * den)) for a in pts]


def fixed_min_scan(h: HayModel, d: HairData, alpha_min, step=Fraction(1, 1000)) -> list[tuple[Fraction, Fraction]]:
    """Likelihood ratio with alpha_min fixed and alpha_max on the step grid up to 1."""
    alpha_min, step = as_rational(alpha_min), as_rational(step)
    anti = _Antiderivative(alpha_polynomial(h, d))
    den = defense_likelihood(h, d)
    base = anti(alpha_min)
    pts = _grid(step, Fraction(0), Fraction(1))
    pts = [a for a in pts if a > alpha_min]
    return [(a, (anti(a) - base) / ((a - alpha_min) * den)) for a in pts]


def argmax(scan: Sequence[tuple[Fraction, Fraction]]) -> tuple[Fraction, Fraction]:
    # first maximum wins, which keeps ties deterministic
    best = scan[0]
    for pt in scan[1:]:
        if pt[1] > best[1]:
            best = pt
    return best
