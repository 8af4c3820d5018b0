"""Exact rational scalars and compact intervals.

Every quantity the algorithms compare or certify is a ``fractions.Fraction``.
Floats are rejected at the boundary (they smuggle in binary rounding); report
code converts outward at the very end, never inward.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import InvariantViolated, ValidationError

RationalLike = Union[int, str, Fraction]


def as_fraction(value: RationalLike) -> Fraction:
    """Coerce an exact input to Fraction. Floats are refused."""
    if isinstance(value, bool):
        raise ValidationError(f"not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise ValidationError(
            f"float {value!r} rejected: pass an int, Fraction, or 'p/q' string"
        )
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"not a rational: {value!r}") from exc
    raise ValidationError(f"not a rational: {value!r}")


def format_fraction(x: Fraction) -> str:
    """Canonical string form: 'p' for integers, 'p/q' otherwise."""
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def pow2(k: int) -> Fraction:
    """2**k as an exact Fraction, k any integer."""
    if k >= 0:
        return Fraction(1 << k)
    return Fraction(1, 1 << (-k))


def floor_log2(x: Fraction) -> int:
    """Largest k with 2**k <= x. Requires x > 0."""
    if x <= 0:
        raise InvariantViolated(f"floor_log2 needs a positive argument, got {x}")
    n, d = x.numerator, x.denominator
    k = n.bit_length() - d.bit_length()
    # bit_length bounds leave k off by at most one; settle exactly.
    if pow2(k) > x:
        k -= 1
    if pow2(k + 1) <= x:
        k += 1
    return k


def fraction_floor(x: Fraction) -> int:
    return x.numerator // x.denominator


@dataclass(frozen=True)
class CompactInterval:
    """Closed interval [lo, hi]; lo == hi is a point."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo = as_fraction(self.lo)
        hi = as_fraction(self.hi)
        if lo > hi:
            raise InvariantViolated(f"interval endpoints out of order: [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __contains__(self, x) -> bool:
        x = as_fraction(x)
        return self.lo <= x <= self.hi

    def is_point(self) -> bool:
        return self.lo == self.hi

    def length(self) -> Fraction:
        return self.hi - self.lo

    def contains_interval(self, other: "CompactInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def intersects(self, other: "CompactInterval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def intersect(self, other: "CompactInterval") -> "CompactInterval | None":
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            return None
        return CompactInterval(lo, hi)

    def hull(self, other: "CompactInterval") -> "CompactInterval":
        return CompactInterval(min(self.lo, other.lo), max(self.hi, other.hi))

    def interior_intersects(self, other: "CompactInterval") -> bool:
        """True when the open interiors overlap (points have empty interior)."""
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        return lo < hi

    def middle_half(self) -> "CompactInterval":
        quarter = self.length() / 4
        return CompactInterval(self.lo + quarter, self.hi - quarter)

    def __str__(self) -> str:
        return f"[{format_fraction(self.lo)}, {format_fraction(self.hi)}]"


def interval(lo: RationalLike, hi: RationalLike) -> CompactInterval:
    return CompactInterval(as_fraction(lo), as_fraction(hi))


def merge_components(parts: Iterable[CompactInterval]) -> tuple[CompactInterval, ...]:
    """Sort and fuse touching or overlapping intervals into components."""
    items = sorted(parts, key=lambda c: (c.lo, c.hi))
    out: list[CompactInterval] = []
    for c in items:
        if out and c.lo <= out[-1].hi:
            if c.hi > out[-1].hi:
                out[-1] = CompactInterval(out[-1].lo, c.hi)
        else:
            out.append(c)
    return tuple(out)


def union_covers(parts: Sequence[CompactInterval], target: CompactInterval) -> bool:
    """Exact test: does the union of ``parts`` contain ``target``?"""
    merged = merge_components(parts)
    for comp in merged:
        if comp.contains_interval(target):
            return True
    return False


def float_enclosure(x: Fraction) -> tuple[float, float]:
    """Outward-rounded float pair [lo, hi] containing the exact value."""
    try:
        f = float(x)
    except OverflowError:
        if x > 0:
            return (sys.float_info.max, math.inf)
        return (-math.inf, -sys.float_info.max)
    if math.isinf(f):
        edge = math.nextafter(f, 0.0)
        return (edge, f) if f > 0 else (f, edge)
    lo = f if Fraction(f) <= x else math.nextafter(f, -math.inf)
    hi = f if Fraction(f) >= x else math.nextafter(f, math.inf)
    return lo, hi
