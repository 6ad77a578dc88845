"""Combination functions: maps from finite multisets over [0,1] to [0,1].

Multisets are passed around as plain sequences; every combination function
must be insensitive to the order of its inputs.  The built-in functions are
noisy-or, max, min, and the arithmetic mean; cumulative-table functions in
the style of a discrete exposure/response distribution can be registered on
top of these.

Empty-multiset conventions: noisy-or and max give 0, min gives 1.  The mean
of the empty multiset is taken to be 0, matching the noisy-or convention.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .errors import DuplicateCombinatorError, UnknownCombinatorError


def noisy_or(values: Sequence) -> float:
    """1 - prod(1 - a_i); empty input gives 0."""
    if not values:
        return 0
    if any(isinstance(v, Fraction) for v in values):
        p = Fraction(1)
        for v in values:
            p *= 1 - v
        return 1 - p
    # switch to log1p when a factor is tiny, to avoid cancellation
    if any(1 - v < 1e-12 for v in values):
        if any(v >= 1 for v in values):
            return 1.0
        return 1.0 - math.exp(math.fsum(math.log1p(-v) for v in values))
    p = 1.0
    for v in values:
        p *= 1.0 - v
    return 1.0 - p


def _max(values):
    return max(values) if values else 0


def _min(values):
    return min(values) if values else 1


def _mean(values):
    if not values:
        return 0
    if any(isinstance(v, Fraction) for v in values):
        return sum(values, Fraction(0)) / len(values)
    return math.fsum(values) / len(values)


@dataclass(frozen=True)
class CombinationFunction:
    name: str
    fn: Callable[[Sequence], object]


@dataclass(frozen=True)
class CumulativeTable:
    """A finite table gamma(0..m) with partial sums Gamma(n).

    gamma entries are nonnegative and sum to at most 1, so the partial sums
    are nondecreasing probabilities.  Queries past the last index clamp to
    Gamma(m).
    """
    gamma: tuple

    def __init__(self, gamma):
        gs = tuple(Fraction(g) for g in gamma)
        if not gs:
            raise ValueError("cumulative table must be nonempty")
        if any(g < 0 for g in gs):
            raise ValueError("cumulative table entries must be nonnegative")
        if sum(gs) > 1:
            raise ValueError("cumulative table entries must sum to at most 1")
        object.__setattr__(self, "gamma", gs)

    def cdf(self, n: int) -> Fraction:
        n = min(n, len(self.gamma) - 1)
        return sum(self.gamma[: n + 1], Fraction(0))

    def as_function(self, name: str) -> CombinationFunction:
        def fn(values):
            n = sum(1 for v in values if v != 0)
            q = self.cdf(n)
            return q if any(isinstance(v, Fraction) for v in values) else float(q)

        return CombinationFunction(name, fn)


class Registry:
    """Name-indexed registry of combination functions.

    Configured once at startup and treated as read-only afterwards.
    """

    def __init__(self, functions=()):
        self._functions = {}
        for f in functions:
            self.register(f)

    def register(self, f: CombinationFunction):
        if f.name in self._functions:
            raise DuplicateCombinatorError(f"combination function {f.name} already registered")
        self._functions[f.name] = f

    def knows(self, name: str) -> bool:
        return name in self._functions

    def names(self):
        return sorted(self._functions)

    def get(self, name: str) -> CombinationFunction:
        try:
            return self._functions[name]
        except KeyError:
            raise UnknownCombinatorError(f"unknown combination function {name}") from None

    def apply(self, name: str, values: Sequence):
        return self.get(name).fn(list(values))

    def copy(self) -> "Registry":
        return Registry(self._functions.values())


_BUILTINS = (
    CombinationFunction("noisyor", noisy_or),
    CombinationFunction("max", _max),
    CombinationFunction("min", _min),
    CombinationFunction("mean", _mean),
)


def default_registry() -> Registry:
    """A fresh registry holding the built-in combination functions."""
    return Registry(_BUILTINS)
