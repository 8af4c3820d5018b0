"""Exact arithmetic primitives: rationals, intervals, enclosures."""

import math
import random
from fractions import Fraction

import pytest

from plcert.errors import InvariantViolated, ValidationError
from plcert.exact import (
    CompactInterval,
    as_fraction,
    float_enclosure,
    floor_log2,
    format_fraction,
    fraction_floor,
    interval,
    merge_components,
    pow2,
    union_covers,
)


@pytest.mark.parametrize("value, expected", [
    (3, Fraction(3)),
    ("-7/4", Fraction(-7, 4)),
    (" 5/8 ", Fraction(5, 8)),
    (Fraction(2, 3), Fraction(2, 3)),
])
def test_as_fraction_accepts_exact_inputs(value, expected):
    assert as_fraction(value) == expected


@pytest.mark.parametrize("value", [0.5, 1.0, True, False, "1/0", "banana", None])
def test_as_fraction_rejects_inexact_inputs(value):
    with pytest.raises(ValidationError):
        as_fraction(value)


@pytest.mark.parametrize("x, text", [
    (Fraction(3), "3"),
    (Fraction(-7, 4), "-7/4"),
    (Fraction(0), "0"),
])
def test_format_fraction(x, text):
    assert format_fraction(x) == text


def test_pow2_and_floor_log2():
    assert pow2(5) == 32
    assert pow2(-3) == Fraction(1, 8)
    rng = random.Random(7)
    for _ in range(50):
        x = Fraction(rng.randint(1, 10**6), rng.randint(1, 10**6))
        k = floor_log2(x)
        assert pow2(k) <= x < pow2(k + 1)
    with pytest.raises(InvariantViolated):
        floor_log2(Fraction(0))


def test_fraction_floor():
    assert fraction_floor(Fraction(7, 2)) == 3
    assert fraction_floor(Fraction(-7, 2)) == -4
    assert fraction_floor(Fraction(4)) == 4


def test_interval_ordering_enforced():
    with pytest.raises(InvariantViolated):
        CompactInterval(Fraction(1), Fraction(0))


def test_interval_predicates():
    a = interval(0, 2)
    assert Fraction(1) in a and Fraction(2) in a
    assert Fraction(3) not in a
    assert not a.is_point() and interval(1, 1).is_point()
    assert a.length() == 2
    assert a.contains_interval(interval(1, 2))
    assert not a.contains_interval(interval(1, 3))
    assert a.intersects(interval(2, 4))
    assert a.intersect(interval(2, 4)) == interval(2, 2)
    assert a.intersect(interval(3, 4)) is None
    assert a.hull(interval(5, 6)) == interval(0, 6)
    assert not a.interior_intersects(interval(2, 4))
    assert a.interior_intersects(interval(1, 4))
    assert a.middle_half() == interval(Fraction(1, 2), Fraction(3, 2))


def test_merge_components_fuses_touching_intervals():
    merged = merge_components([
        interval(3, 4), interval(0, 1), interval(1, 2), interval(5, 6),
        interval(Fraction(7, 2), 5),
    ])
    assert merged == (interval(0, 2), interval(3, 6))


def test_union_covers_requires_a_single_component():
    parts = [interval(0, 1), interval(1, 2)]
    assert union_covers(parts, interval(0, 2))
    assert union_covers(parts, interval(Fraction(1, 2), Fraction(3, 2)))
    gappy = [interval(0, 1), interval(Fraction(3, 2), 2)]
    assert not union_covers(gappy, interval(0, 2))
    assert union_covers(gappy, interval(0, 1))


def test_float_enclosure_brackets_the_exact_value():
    rng = random.Random(11)
    for _ in range(100):
        x = Fraction(rng.randint(-10**9, 10**9), rng.randint(1, 10**9))
        lo, hi = float_enclosure(x)
        assert Fraction(lo) <= x <= Fraction(hi)
        assert hi == lo or hi == math.nextafter(lo, math.inf)


def test_float_enclosure_one_third():
    lo, hi = float_enclosure(Fraction(1, 3))
    assert lo < hi
    assert Fraction(lo) < Fraction(1, 3) < Fraction(hi)


def test_float_enclosure_handles_overflow():
    lo, hi = float_enclosure(Fraction(10**400))
    assert math.isinf(hi) and not math.isinf(lo)
    lo2, hi2 = float_enclosure(-Fraction(10**400))
    assert math.isinf(lo2) and not math.isinf(hi2)
