from fractions import Fraction

import pytest

from rbnet.combinators import (CombinationFunction, CumulativeTable, Registry,
                               default_registry, noisy_or)
from rbnet.errors import DuplicateCombinatorError, UnknownCombinatorError


def test_noisy_or_values():
    assert noisy_or([]) == 0
    assert noisy_or([0.5, 0.5]) == pytest.approx(0.75)
    assert noisy_or([1.0, 0.3]) == 1.0
    assert noisy_or([Fraction(1, 2), Fraction(1, 3)]) == Fraction(2, 3)


def test_noisy_or_near_one_is_stable():
    vals = [1 - 1e-15] + [0.5] * 10
    p = noisy_or(vals)
    assert 0.0 <= p <= 1.0
    assert p == pytest.approx(1.0)


def test_empty_multiset_conventions():
    reg = default_registry()
    assert reg.apply("noisyor", []) == 0
    assert reg.apply("max", []) == 0
    assert reg.apply("min", []) == 1
    assert reg.apply("mean", []) == 0


def test_min_max_mean():
    reg = default_registry()
    assert reg.apply("max", [0.2, 0.7]) == 0.7
    assert reg.apply("min", [0.2, 0.7]) == 0.2
    assert reg.apply("mean", [Fraction(1, 2), Fraction(1, 4)]) == Fraction(3, 8)


def test_cumulative_table():
    t = CumulativeTable((Fraction(1, 10), Fraction(2, 10), Fraction(3, 10)))
    assert t.cdf(0) == Fraction(1, 10)
    assert t.cdf(1) == Fraction(3, 10)
    assert t.cdf(99) == Fraction(6, 10)  # clamps past the last index
    fn = t.as_function("g").fn
    # counts nonzero entries only
    assert fn([0.0, 0.4, 0.0]) == pytest.approx(0.3)
    assert fn([Fraction(1, 2)]) == Fraction(3, 10)


def test_cumulative_table_validation():
    with pytest.raises(ValueError):
        CumulativeTable(())
    with pytest.raises(ValueError):
        CumulativeTable((Fraction(-1, 2),))
    with pytest.raises(ValueError):
        CumulativeTable((Fraction(1, 2), Fraction(2, 3)))


def test_registry():
    reg = default_registry()
    assert reg.knows("noisyor")
    assert set(reg.names()) >= {"noisyor", "max", "min", "mean"}
    with pytest.raises(UnknownCombinatorError):
        reg.get("nope")
    with pytest.raises(DuplicateCombinatorError):
        reg.register(CombinationFunction("max", max))
    reg2 = reg.copy()
    reg2.register(CombinationFunction("custom", lambda v: 0))
    assert reg2.knows("custom") and not reg.knows("custom")
