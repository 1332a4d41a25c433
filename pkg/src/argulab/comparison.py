"""Candidate-model competitions: test intervals, scores and domination."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .distributions import OutcomeDistribution, OutcomeSpace
from .ratmath import as_rational

__all__ = [
    "CandidateModel",
    "Competition",
    "test_interval",
    "test_p",
    "beats",
    "beats_all",
    "required_warnings",
]


@dataclass(frozen=True)
class CandidateModel:
    name: str
    distribution: OutcomeDistribution
    product_warning: str = ""


@dataclass(frozen=True)
class Competition:
    models: tuple[CandidateModel, ...]
    true_outcome: int
    space: OutcomeSpace
    ks: frozenset[int] = field(default_factory=lambda: frozenset({0, 1, 2}))
    factor: Fraction = Fraction(1000)

    def __post_init__(self):
        object.__setattr__(self, "models", tuple(self.models))
        object.__setattr__(self, "ks", frozenset(self.ks))
        object.__setattr__(self, "factor", as_rational(self.factor))
        if self.true_outcome not in self.space:
            raise ValueError(f"true outcome {self.true_outcome} outside the outcome space")
        if any(k < 0 for k in self.ks):
            raise ValueError("interval radii must be natural")
        for m in self.models:
            if m.distribution.space != self.space:
                raise ValueError(f"model {m.name!r} is over a different outcome space")

    def with_models(self, models: Iterable[CandidateModel]) -> "Competition":
        return Competition(tuple(models), self.true_outcome, self.space, self.ks, self.factor)


def test_interval(c: Competition, k: int) -> range:
    """Outcomes within distance k of the true outcome, clipped to the space."""
    if k < 0:
        raise ValueError("k must be natural")
    lo = max(c.true_outcome - k, c.space.min)
    hi = min(c.true_outcome + k, c.space.max)
    return range(lo, hi + 1)


def test_p(c: Competition, m: CandidateModel, k: int) -> Fraction:
    if k not in c.ks:
        raise ValueError(f"k={k} is not one of the competition's radii {sorted(c.ks)}")
    mass = m.distribution.mass
    return sum((mass[a] for a in test_interval(c, k)), Fraction(0))


def beats(c: Competition, m1: CandidateModel, m2: CandidateModel) -> bool:
    return all(test_p(c, m1, k) > c.factor * test_p(c, m2, k) for k in sorted(c.ks))


def beats_all(c: Competition, m: CandidateModel) -> bool:
    if m not in c.models:
        raise ValueError(f"model {m.name!r} is not part of the competition")
    return all(beats(c, m, other) for other in c.models if other is not m)


def required_warnings(c: Competition) -> list[str]:
    """Warnings of every model that beats all others.  Empty strings are kept."""
    return [m.product_warning for m in c.models if beats_all(c, m)]


def best_models(c: Competition) -> Sequence[CandidateModel]:
    return [m for m in c.models if beats_all(c, m)]


# keep pytest from collecting these when imported into a test module
test_interval.__test__ = False
test_p.__test__ = False
