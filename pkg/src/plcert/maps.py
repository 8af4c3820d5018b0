"""Uniform exact-map adapter over the four map kinds.

Wraps a compact PLMap, a tiled full-line/half-line map, or a compactified
map behind one interface: exact evaluation, exact n-step interval images,
window restriction to a PLMap, materialized iterates, fixed points, and
level-set solving. Certificate code never dispatches on the concrete type.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .errors import DomainExceeded, InvariantViolated, PieceExplosion
from .exact import CompactInterval, RationalLike, pow2
from .linemap import (
    DyadicCompactification,
    DyadicMirrorTiled,
    HalfLineTiled,
    MirrorTranslationTiled,
)
from .plmap import PLMap, compose

MapObject = Union[
    PLMap,
    MirrorTranslationTiled,
    DyadicMirrorTiled,
    HalfLineTiled,
    DyadicCompactification,
]

NODE_CAP = 10**6
SCHEDULE_EXPONENTS = range(3, 13)


@dataclass(frozen=True)
class ExactMap:
    obj: MapObject
    map_id: str = field(default="", compare=False)

    @property
    def kind(self) -> str:
        if isinstance(self.obj, PLMap):
            return "compact"
        return self.obj.domain_kind

    @property
    def domain(self) -> Optional[CompactInterval]:
        if isinstance(self.obj, PLMap):
            return self.obj.domain
        if isinstance(self.obj, DyadicCompactification):
            return CompactInterval(Fraction(0), Fraction(1))
        return None

    def __call__(self, x: RationalLike) -> Fraction:
        return self.obj(x)

    def image(self, iv: CompactInterval, n: int = 1) -> CompactInterval:
        if n < 1:
            raise InvariantViolated(f"step count must be >= 1, got {n}")
        out = iv
        for _ in range(n):
            if out.is_point():
                if isinstance(self.obj, PLMap) and out.lo not in self.obj.domain:
                    raise DomainExceeded(
                        f"point {out.lo} leaves domain {self.obj.domain}",
                        lo=out.lo,
                        hi=out.hi,
                    )
                v = self.obj(out.lo)
                out = CompactInterval(v, v)
                continue
            if isinstance(self.obj, PLMap):
                if not self.obj.domain.contains_interval(out):
                    raise DomainExceeded(
                        f"interval {out} leaves domain {self.obj.domain}",
                        lo=out.lo,
                        hi=out.hi,
                    )
                out = self.obj.range_on(out)
            else:
                out = self.obj.one_step_image(out)
        return out

    def restrict(self, w: CompactInterval) -> PLMap:
        if isinstance(self.obj, PLMap):
            if not self.obj.domain.contains_interval(w):
                raise DomainExceeded(
                    f"window {w} leaves domain {self.obj.domain}",
                    lo=w.lo,
                    hi=w.hi,
                )
            return self.obj.restrict(w)
        return self.obj.restrict_window(w)

    def materialize(
        self, w: CompactInterval, iterate: int, cap: int = NODE_CAP
    ) -> PLMap:
        """PLMap of f^iterate on w; grows the outer restriction as ranges
        demand, so only true domain departures fail."""
        if iterate < 1:
            raise InvariantViolated(f"iterate must be >= 1, got {iterate}")
        g = self.restrict(w)
        for _ in range(iterate - 1):
            r = g.range_on()
            if r.is_point():
                r = CompactInterval(r.lo, r.lo + 1)
            g = compose(self.restrict(r), g)
            if g.piece_count() > cap:
                raise PieceExplosion(
                    f"materialized iterate exceeds {cap} pieces"
                )
        return g

    def fixed_points(self, w: CompactInterval) -> tuple[CompactInterval, ...]:
        if isinstance(self.obj, PLMap):
            return self.obj.fixed_points(within=w)
        return self.obj.fixed_points_in(w)

    def solve(
        self, c: RationalLike, w: CompactInterval
    ) -> tuple[CompactInterval, ...]:
        if isinstance(self.obj, PLMap):
            return self.obj.solve_eq(c, within=w)
        return self.obj.solve_in(c, w)

    def lipschitz(self) -> Fraction:
        if isinstance(self.obj, PLMap):
            return self.obj.lipschitz_const()
        return self.obj.lipschitz()

    def window_schedule(self) -> tuple[CompactInterval, ...]:
        kind = self.kind
        if kind == "compact":
            return (self.obj.domain,)
        out = []
        for j in SCHEDULE_EXPONENTS:
            if kind == "full_line":
                out.append(CompactInterval(-pow2(j), pow2(j)))
            elif kind == "half_line":
                out.append(CompactInterval(pow2(-j), pow2(j)))
            else:
                out.append(CompactInterval(pow2(-j - 1), 1 - pow2(-j - 1)))
        return tuple(out)

    def census_window(self) -> CompactInterval:
        return self.window_schedule()[-1]


def as_exact_map(m: Union[ExactMap, MapObject], map_id: str = "") -> ExactMap:
    if isinstance(m, ExactMap):
        return m
    return ExactMap(m, map_id)
