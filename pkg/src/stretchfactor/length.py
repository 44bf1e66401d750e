"""Exact and Monte Carlo stretching factors.

The length of an automorphism is the mass the pushed-forward uniform
current gives to the set of geodesics through the base vertex; it is
computed exactly as a sum of pair masses over preimage partitions, one
term per oriented letter.  The Monte Carlo estimator divides the
cyclically reduced image length of a uniform random reduced word by the
word length; the two agree up to sampling error plus an O(1/n) seam bias.
"""

from __future__ import annotations

import random
import statistics
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .automorphisms import Automorphism
from .boundary import Budget, PartitionCache, _resolve, pushforward_current_value
from .errors import InputError
from .measures import FrequencyMeasure, uniform_measure
from .words import Word, alphabet, cyclic_length, random_reduced

ZERO = Fraction(0)


@dataclass(frozen=True)
class LengthReport:
    """Exact length with its per-letter decomposition."""

    value: Fraction
    breakdown: dict[int, Fraction]
    measure: str
    nodes: int

    def __post_init__(self):
        assert self.value == sum(self.breakdown.values(), ZERO)


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    n: int
    trials: int
    seed: int

    def __post_init__(self):
        if self.trials < 2:
            raise InputError("need at least two trials")
        assert self.stderr >= 0


def eta_length(
    auto: Automorphism,
    mu: FrequencyMeasure,
    *,
    budget: Optional[int | Budget] = None,
    cache: Optional[PartitionCache] = None,
) -> LengthReport:
    """Length of the pushforward of the current attached to mu."""
    if mu.rank != auto.rank:
        raise InputError("measure and automorphism ranks differ")
    budget, cache = _resolve(budget, cache)
    breakdown = {
        x: pushforward_current_value(auto, mu, Word((x,)), budget=budget, cache=cache)
        for x in alphabet(auto.rank)
    }
    return LengthReport(
        value=sum(breakdown.values(), ZERO),
        breakdown=breakdown,
        measure=mu.label or mu.kind,
        nodes=budget.spent,
    )


def length_exact(
    auto: Automorphism,
    *,
    budget: Optional[int | Budget] = None,
    cache: Optional[PartitionCache] = None,
) -> LengthReport:
    """Exact generic stretching factor: the uniform-current length."""
    return eta_length(auto, uniform_measure(auto.rank), budget=budget, cache=cache)


def length_mc(
    auto: Automorphism, n: int, trials: int, seed: int
) -> McEstimate:
    """Mean of |phi(w)|_cyclic / n over uniform random reduced words w.

    Deterministic given the seed; trial t draws from its own stream so
    results do not depend on evaluation order.
    """
    if n < 10:
        raise InputError("word length must be at least 10")
    if trials < 2:
        raise InputError("need at least two trials")
    values = []
    for t in range(trials):
        rng = random.Random((seed << 32) ^ t)
        w = random_reduced(n, auto.rank, rng)
        values.append(cyclic_length(auto.apply(w)) / n)
    mean = statistics.fmean(values)
    stderr = statistics.stdev(values) / trials**0.5
    return McEstimate(mean=mean, stderr=stderr, n=n, trials=trials, seed=seed)
