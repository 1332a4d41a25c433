"""Exact hypergeometric and binomial families and their conditional forms."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Iterator, Mapping

from .ratmath import as_rational, binom_coeff

__all__ = [
    "UndefinedParameters",
    "DegenerateDistribution",
    "OutcomeSpace",
    "OutcomeDistribution",
    "hyper_pmf",
    "cond_hyper",
    "bin_distr",
    "cond_binom",
]


class UndefinedParameters(ValueError):
    """Raised when a distribution is asked for outside its domain."""


class DegenerateDistribution(ValueError):
    """Raised when every unnormalized mass on the outcome space is zero."""


@dataclass(frozen=True)
class OutcomeSpace:
    min: int
    max: int

    def __post_init__(self):
        if self.min < 0 or self.min > self.max:
            raise ValueError(f"bad outcome space [{self.min}, {self.max}]")

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.min, self.max + 1))

    def __contains__(self, x) -> bool:
        return isinstance(x, int) and self.min <= x <= self.max

    def __len__(self) -> int:
        return self.max - self.min + 1


@dataclass(frozen=True)
class OutcomeDistribution:
    space: OutcomeSpace
    mass: Mapping[int, Fraction] = field(hash=False)

    def __post_init__(self):
        m = {int(a): as_rational(self.mass.get(a, 0)) for a in self.space}
        extra = set(self.mass) - set(m)
        if extra:
            raise ValueError(f"mass given outside the space: {sorted(extra)[:5]}")
        if any(v < 0 for v in m.values()):
            raise ValueError("negative probability mass")
        if sum(m.values()) != 1:
            raise ValueError("masses do not sum to exactly 1")
        object.__setattr__(self, "mass", MappingProxyType(m))

    def __getitem__(self, a: int) -> Fraction:
        return self.mass[a] if a in self.space else Fraction(0)

    def __eq__(self, other):
        if not isinstance(other, OutcomeDistribution):
            return NotImplemented
        return self.space == other.space and dict(self.mass) == dict(other.mass)

    def __hash__(self):
        return hash((self.space, tuple(self.mass.items())))

    @classmethod
    def from_weights(cls, space: OutcomeSpace, weights: Mapping[int, Fraction | int]) -> "OutcomeDistribution":
        """Normalize nonnegative weights over ``space``."""
        w = {a: as_rational(weights.get(a, 0)) for a in space}
        total = sum(w.values())
        if total == 0:
            raise DegenerateDistribution("all unnormalized masses vanish on the outcome space")
        return cls(space, {a: v / total for a, v in w.items()})

    @classmethod
    def uniform(cls, space: OutcomeSpace) -> "OutcomeDistribution":
        return cls(space, {a: Fraction(1, len(space)) for a in space})

    @classmethod
    def point(cls, space: OutcomeSpace, a: int) -> "OutcomeDistribution":
        if a not in space:
            raise ValueError(f"{a} not in space")
        return cls(space, {x: Fraction(int(x == a)) for x in space})


def _check_natural(**kw):
    for name, v in kw.items():
        if not isinstance(v, int) or isinstance(v, bool) or v < 0:
            raise UndefinedParameters(f"{name} must be a natural number, got {v!r}")


def _hyper_weight(k: int, s: int, N: int, s_prime: int) -> int:
    # numerator C(s, s') C(N - s, k - s'); zero off the support
    if s_prime > s or k - s_prime < 0 or k - s_prime > N - s:
        return 0
    return binom_coeff(s, s_prime) * binom_coeff(N - s, k - s_prime)


def hyper_pmf(k: int, s: int, N: int, s_prime: int) -> Fraction:
    """Probability that a uniform k-subset of N items, s of them marked, holds s' marked ones.

    Defined for s <= N and k <= N.  Counts s' outside the attainable range
    max(0, k-(N-s)) .. min(s, k) have probability zero.
    """
    _check_natural(k=k, s=s, N=N, s_prime=s_prime)
    if s > N or k > N:
        raise UndefinedParameters(f"hyper needs s <= N and k <= N (k={k}, s={s}, N={N})")
    return Fraction(_hyper_weight(k, s, N, s_prime), binom_coeff(N, k))


def cond_hyper(
    s1: int,
    s2: int,
    x1_size: int,
    x2_size: int,
    sample1: int,
    sample2: int,
    total_successes: int,
    space: OutcomeSpace,
    *,
    literal_second_factor: bool = False,
) -> OutcomeDistribution:
    """Distribution of marked items in the first of two independent draws given the combined total.

    Draw ``sample1`` items from a population of ``x1_size`` with ``s1``
    marked, and ``sample2`` from ``x2_size`` with ``s2`` marked.  The mass at
    ``a`` is proportional to hyper(sample1, s1, x1_size, a) *
    hyper(sample2, s2, x2_size, total_successes - a).

    ``literal_second_factor=True`` passes ``s1`` to the second factor
    instead of ``s2``, reproducing a displayed formula that disagrees with
    the verbal definition.
    """
    _check_natural(s1=s1, s2=s2, x1_size=x1_size, x2_size=x2_size, sample1=sample1,
                   sample2=sample2, total_successes=total_successes)
    s2_used = s1 if literal_second_factor else s2
    if s1 > x1_size or sample1 > x1_size or s2_used > x2_size or sample2 > x2_size:
        raise UndefinedParameters("marked counts and sample sizes must not exceed their populations")
    # the C(N, k) denominators are common to every outcome and cancel
    lo, hi = space.min, space.max
    t = total_successes
    f1 = _binom_run(s1, lo, hi)
    g1 = _binom_run(x1_size - s1, sample1 - hi, sample1 - lo)[::-1]
    f2 = _binom_run(s2_used, t - hi, t - lo)[::-1]
    g2 = _binom_run(x2_size - s2_used, sample2 - t + lo, sample2 - t + hi)
    weights = {a: f1[i] * g1[i] * f2[i] * g2[i] for i, a in enumerate(space)}
    return OutcomeDistribution.from_weights(space, weights)


def _binom_run(n: int, lo: int, hi: int) -> list[int]:
    """[C(n, j) for j in lo..hi], zero outside 0..n, via the multiplicative recurrence."""
    out = []
    cur = None
    for j in range(lo, hi + 1):
        if j < 0 or j > n:
            out.append(0)
            cur = None
            continue
        if cur is None:
            cur = binom_coeff(n, j)
        else:
            cur = cur * (n - j + 1) // j
        out.append(cur)
    return out


def bin_distr(p, n: int, t: int) -> Fraction:
    """C(n, t) p^t (1-p)^(n-t)."""
    _check_natural(n=n, t=t)
    p = as_rational(p)
    if t > n:
        raise UndefinedParameters(f"t={t} exceeds n={n}")
    if not 0 <= p <= 1:
        raise UndefinedParameters(f"p={p} outside [0, 1]")
    return binom_coeff(n, t) * p**t * (1 - p) ** (n - t)


def cond_binom(p1, p2, n: int, total: int, space: OutcomeSpace) -> OutcomeDistribution:
    """Successes among the first of two Binomial(n, p_i) draws given their sum is ``total``.

    The product bin_distr(p1, n, a) * bin_distr(p2, n, total - a) equals a
    factor common to all ``a`` times C(n, a) C(n, total - a) theta^a, where
    theta is the odds ratio.  Only that last part is computed.
    """
    _check_natural(n=n, total=total)
    p1, p2 = as_rational(p1), as_rational(p2)
    if not (0 < p1 < 1 and 0 < p2 < 1):
        raise UndefinedParameters("cond_binom needs 0 < p1, p2 < 1")
    if total > 2 * n:
        raise UndefinedParameters("total exceeds 2n")
    theta = (p1 * (1 - p2)) / ((1 - p1) * p2)
    weights = {}
    tpow = Fraction(1)
    for a in space:
        rest = total - a
        if 0 <= rest <= n and a <= n:
            weights[a] = binom_coeff(n, a) * binom_coeff(n, rest) * tpow
        else:
            weights[a] = 0
        tpow *= theta
    return OutcomeDistribution.from_weights(space, weights)
