"""Prior polytopes over bin probabilities and exact integration over them.

A region is a union of *ordering cells*: for a permutation ``order`` of the
bins, the cell is the part of the probability simplex where the bin masses
increase along ``order``.  Every cell has the iterated-bound description

    q[o1] in [0, 1/n]
    q[ok] in [q[o(k-1)], (1 - q[o1] - ... - q[o(k-1)]) / (n - k + 1)]
    q[on] = 1 - (sum of the others)

which is what the iterated route integrates.  The second route integrates
products of univariate factors directly over the ordered simplex using the
exponential-spacings representation of the Dirichlet distribution; it is
much faster for high-degree integrands and gives an independent check.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb, factorial
from typing import Callable, Iterable, Mapping, Sequence

from ..ratmath import SparsePoly, poly_integrate

__all__ = [
    "Cell",
    "PriorRegion",
    "is_unimodal",
    "region_from_predicate",
    "region_4bin",
    "region_5bin",
    "bin_names",
    "ordered_simplex_integral",
    "monte_carlo_hits",
    "shape_mask_4bin",
    "shape_mask_5bin",
    "unimodal_mask",
]


def bin_names(n: int) -> tuple[str, ...]:
    return tuple(f"p{i + 1}" for i in range(n))


def is_unimodal(values: Sequence) -> bool:
    """Single peak: nondecreasing up to some index, nonincreasing after it."""
    n = len(values)
    m = max(range(n), key=lambda i: values[i])
    return all(values[i] <= values[i + 1] for i in range(m)) and all(
        values[i] >= values[i + 1] for i in range(m, n - 1)
    )


@dataclass(frozen=True)
class Cell:
    """Points of the simplex whose bin masses increase along ``order`` (0-based bin indices)."""

    order: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.order)

    @property
    def variables(self) -> tuple[str, ...]:
        return bin_names(self.n)

    @cached_property
    def bounds(self) -> tuple[tuple[str, SparsePoly, SparsePoly], ...]:
        """(variable, lower, upper) from the outermost integral inwards."""
        vs = self.variables
        out = []
        used: list[str] = []
        for k, b in enumerate(self.order[:-1]):
            name = vs[b]
            lower = SparsePoly.var(used[-1], vs) if used else SparsePoly.constant(0, vs)
            rest = SparsePoly.linear({u: -1 for u in used}, 1, vs)
            upper = rest.scale(Fraction(1, self.n - k))
            out.append((name, lower, upper))
            used.append(name)
        return tuple(out)

    @cached_property
    def dependent(self) -> tuple[str, SparsePoly]:
        vs = self.variables
        others = [vs[b] for b in self.order[:-1]]
        return vs[self.order[-1]], SparsePoly.linear({u: -1 for u in others}, 1, vs)

    def integrate(self, integrand: SparsePoly) -> Fraction:
        """Iterated exact integration of a polynomial in p1..pn over the cell."""
        p = integrand.with_variables(self.variables)
        dep, expr = self.dependent
        p = p.substitute(dep, expr)
        for name, lo, hi in reversed(self.bounds):
            p = poly_integrate(p, name, lo, hi)
        return p.constant_value()

    def contains(self, point: Sequence) -> bool:
        """Membership for a point given as n bin masses (ties included)."""
        if sum(point) != 1 or any(x < 0 for x in point):
            return False
        vals = [point[b] for b in self.order]
        return all(vals[i] <= vals[i + 1] for i in range(self.n - 1))


def _rank_vector(order: Sequence[int]) -> list[int]:
    rank = [0] * len(order)
    for r, b in enumerate(order):
        rank[b] = r
    return rank


@dataclass(frozen=True)
class PriorRegion:
    bins: int
    cells: tuple[Cell, ...]
    name: str = ""

    def __post_init__(self):
        orders = [c.order for c in self.cells]
        if len(set(orders)) != len(orders):
            raise ValueError("duplicate cells")
        for o in orders:
            if sorted(o) != list(range(self.bins)):
                raise ValueError(f"{o} is not a permutation of the bins")

    @property
    def variables(self) -> tuple[str, ...]:
        return bin_names(self.bins)

    def cell_volumes(self) -> list[Fraction]:
        one = SparsePoly.constant(1, self.variables)
        return [c.integrate(one) for c in self.cells]

    def volume(self) -> Fraction:
        # each ordering cell of the n-simplex has the same measure
        return Fraction(len(self.cells), factorial(self.bins) * factorial(self.bins - 1))

    def integrate(self, integrand: SparsePoly) -> Fraction:
        """Iterated route: exact integral of a polynomial over the whole region."""
        return sum((c.integrate(integrand) for c in self.cells), Fraction(0))

    def moment(self, exponents: Sequence[int]) -> Fraction:
        """Chain route: integral of prod p_b^e_b over the region."""
        factors = [{e: {0: Fraction(1)}} for e in exponents]
        total = Fraction(0)
        for c in self.cells:
            for r, v in ordered_simplex_integral(c.order, factors).items():
                total += v
        return total

    def mean(self, bin_index: int) -> Fraction:
        e = [0] * self.bins
        e[bin_index] = 1
        return self.moment(e) / self.volume()

    def contains(self, point: Sequence) -> bool:
        return any(c.contains(point) for c in self.cells)

    @property
    def key(self) -> tuple:
        return (self.bins, tuple(c.order for c in self.cells))


def region_from_predicate(n: int, predicate: Callable[[list[int]], bool], name: str = "") -> PriorRegion:
    """Union of the ordering cells whose rank vector satisfies ``predicate``.

    The rank vector gives, for every bin, its position in increasing order of
    mass; ties have measure zero and are ignored.
    """
    cells = []
    for order in itertools.permutations(range(n)):
        if predicate(_rank_vector(order)):
            cells.append(Cell(tuple(order)))
    return PriorRegion(n, tuple(cells), name)


def _first_smallest(rank: list[int]) -> bool:
    return rank[0] == 0


def region_4bin() -> PriorRegion:
    """Unimodal four-bin distributions whose first bin is the smallest.

    The four cells come out in the order B1..B4: p2 > p3 > p4, p3 > p2 > p4,
    p3 > p4 > p2, p4 > p3 > p2.
    """
    r = region_from_predicate(4, lambda rk: _first_smallest(rk) and is_unimodal(rk), "4bin")
    wanted = [(0, 3, 2, 1), (0, 3, 1, 2), (0, 1, 3, 2), (0, 1, 2, 3)]
    assert sorted(c.order for c in r.cells) == sorted(wanted)
    return PriorRegion(4, tuple(Cell(o) for o in wanted), "4bin")


def region_5bin(tail_below_middle: bool = True, unimodal: bool = True) -> PriorRegion:
    """Five-bin region with a new top bin for widths above the old range.

    By default both the first and the fifth bin lie below each of the
    middle three and the profile is unimodal.  ``tail_below_middle=False``
    only constrains the first bin; ``unimodal=False`` drops the single-peak
    condition.
    """
    def pred(rk):
        mid = rk[1:4]
        if not all(rk[0] < m for m in mid):
            return False
        if tail_below_middle and not all(rk[4] < m for m in mid):
            return False
        return is_unimodal(rk) if unimodal else True

    tag = "5bin" + ("" if tail_below_middle else "-free-tail") + ("" if unimodal else "-any-shape")
    return region_from_predicate(5, pred, tag)


# ordered-simplex route -----------------------------------------------------

# a factor is {power of p: {power of t: coefficient}}, homogeneous in (p, t)
Factor = Mapping[int, Mapping[int, Fraction]]


def _factor_degree(f: Factor) -> int:
    degs = {j + r for j, tr in f.items() for r in tr}
    if len(degs) != 1:
        raise ValueError("factor must be homogeneous in (p, t)")
    return degs.pop()


def ordered_simplex_integral(order: Sequence[int], factors: Sequence[Factor]) -> dict[int, Fraction]:
    """Integrate prod_b f_b(p_b) over the cell of ``order``, as a polynomial in t.

    ``factors[b]`` is bin b's factor, a polynomial in p_b whose coefficients
    are polynomials in an auxiliary parameter t, homogeneous of some degree
    d_b in (p_b, t) jointly.  Returns {t power: coefficient}.

    Write the ordered masses as q_k = sum_{m<=k} y_m / (n - m + 1) with y on
    the standard simplex (Jacobian 1/n!).  For a monomial of degree D in y,
    the simplex integral is E[monomial(Y)] / (D + n - 1)! with Y i.i.d.
    Exp(1), and the expectation is taken one y at a time from the top of the
    chain downwards.
    """
    n = len(order)
    if len(factors) != n:
        raise ValueError("one factor per bin is needed")
    total_deg = sum(_factor_degree(f) for f in factors)
    # state: power of q_(k-1) -> {t power: coefficient}
    state: dict[int, dict[int, Fraction]] = {0: {0: Fraction(1)}}
    for k in range(n, 0, -1):
        f = factors[order[k - 1]]
        prod: dict[int, dict[int, Fraction]] = {}
        for j, tr in state.items():
            for jj, tr2 in f.items():
                dst = prod.setdefault(j + jj, {})
                for r, c in tr.items():
                    for r2, c2 in tr2.items():
                        dst[r + r2] = dst.get(r + r2, 0) + c * c2
        # q_k = u + y/w with u = q_(k-1); E[y^l] = l!
        w = n - k + 1
        state = {}
        for j, tr in prod.items():
            lmin = j if k == 1 else 0
            for l in range(lmin, j + 1):
                fac = comb(j, l) * Fraction(factorial(l), w**l)
                dst = state.setdefault(j - l, {})
                for r, c in tr.items():
                    dst[r] = dst.get(r, 0) + c * fac
    res = state.get(0, {})
    nf = factorial(n)
    return {r: c / (factorial(total_deg - r + n - 1) * nf) for r, c in sorted(res.items()) if c}


def monomial_factor(e: int) -> dict[int, dict[int, Fraction]]:
    return {e: {0: Fraction(1)}}


def mixture_factor(count: int, shift: Fraction) -> dict[int, dict[int, Fraction]]:
    """(p + shift * t)^count expanded."""
    if shift == 0:
        return {count: {0: Fraction(1)}}
    shift = Fraction(shift)
    return {j: {count - j: comb(count, j) * shift ** (count - j)} for j in range(count + 1)}


def unimodal_mask(pts):
    """Row-wise single-peak test on a (samples, n) float array; never falls after rising again."""
    import numpy as np

    d = np.diff(pts, axis=1)
    fell = np.logical_or.accumulate(d < 0, axis=1)
    return ~np.any(fell[:, :-1] & (d[:, 1:] > 0), axis=1)


def shape_mask_5bin(pts, tail_below_middle: bool = True, unimodal: bool = True):
    """Membership in the five-bin region tested on the point values directly."""
    import numpy as np

    mid = pts[:, 1:4].min(axis=1)
    ok = pts[:, 0] < mid
    if tail_below_middle:
        ok &= pts[:, 4] < mid
    if unimodal:
        ok &= unimodal_mask(pts)
    return ok


def shape_mask_4bin(pts):
    import numpy as np

    return (pts[:, 0] < pts[:, 1:].min(axis=1)) & unimodal_mask(pts)


def monte_carlo_hits(n: int, mask, samples: int, seed: int = 0) -> int:
    """Count uniform simplex samples (seeded PCG64) accepted by ``mask``.

    The mask works on the sampled values, so it is independent of the cell
    decomposition; hits / samples estimates volume / simplex volume.
    """
    import numpy as np

    if samples <= 0:
        raise ValueError("samples must be positive")
    rng = np.random.Generator(np.random.PCG64(seed))
    # uniform on the simplex is Dirichlet(1, ..., 1)
    pts = rng.dirichlet(np.ones(n), size=samples)
    return int(np.count_nonzero(mask(pts)))
