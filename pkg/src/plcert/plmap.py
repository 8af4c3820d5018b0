"""Continuous piecewise-linear maps on compact intervals.

A map is its node list: pairs (x, y) with strictly increasing x, linear in
between. Constructors keep every node given to them, including collinear
ones; only ``compose`` normalizes, so restriction windows keep their stated
endpoints and piece counts are reproducible.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import (
    DomainExceeded,
    InvariantViolated,
    OutOfDomain,
    PieceExplosion,
)
from .exact import CompactInterval, RationalLike, as_fraction, merge_components

Node = tuple[Fraction, Fraction]


def _collinear(a: Node, b: Node, c: Node) -> bool:
    return (b[0] - a[0]) * (c[1] - a[1]) == (c[0] - a[0]) * (b[1] - a[1])


@dataclass(frozen=True)
class PLMap:
    """Continuous piecewise-linear function given by its breakpoint nodes."""

    nodes: tuple[Node, ...]

    def __post_init__(self):
        nodes = tuple(
            (as_fraction(x), as_fraction(y)) for x, y in self.nodes
        )
        if len(nodes) < 2:
            raise InvariantViolated("a map needs at least two nodes")
        for (x1, _), (x2, _) in zip(nodes, nodes[1:]):
            if x1 >= x2:
                raise InvariantViolated(
                    f"node x-coordinates must strictly increase, got {x1} then {x2}"
                )
        object.__setattr__(self, "nodes", nodes)

    @property
    def domain(self) -> CompactInterval:
        return CompactInterval(self.nodes[0][0], self.nodes[-1][0])

    @property
    def xs(self) -> tuple[Fraction, ...]:
        return tuple(x for x, _ in self.nodes)

    def piece_count(self) -> int:
        return len(self.nodes) - 1

    def slopes(self) -> tuple[Fraction, ...]:
        out = []
        for (x1, y1), (x2, y2) in zip(self.nodes, self.nodes[1:]):
            out.append((y2 - y1) / (x2 - x1))
        return tuple(out)

    def __call__(self, x: RationalLike) -> Fraction:
        x = as_fraction(x)
        dom = self.domain
        if x not in dom:
            raise OutOfDomain(f"{x} outside domain {dom}")
        xs = self.xs
        i = bisect_right(xs, x) - 1
        if i == len(xs) - 1:
            return self.nodes[-1][1]
        x1, y1 = self.nodes[i]
        x2, y2 = self.nodes[i + 1]
        if x == x1:
            return y1
        return y1 + (y2 - y1) * (x - x1) / (x2 - x1)

    def range_on(self, window: CompactInterval | None = None) -> CompactInterval:
        """Exact image hull of ``window`` (default: whole domain)."""
        if window is None:
            window = self.domain
        if not self.domain.contains_interval(window):
            raise OutOfDomain(f"window {window} outside domain {self.domain}")
        values = [self(window.lo), self(window.hi)]
        for x, y in self.nodes:
            if window.lo < x < window.hi:
                values.append(y)
        return CompactInterval(min(values), max(values))

    def solve_eq(
        self, c: RationalLike, within: CompactInterval | None = None
    ) -> tuple[CompactInterval, ...]:
        """Solution set of f(x) = c as closed components (points or plateaus)."""
        c = as_fraction(c)
        parts: list[CompactInterval] = []
        for (x1, y1), (x2, y2) in zip(self.nodes, self.nodes[1:]):
            if y1 == y2:
                if y1 == c:
                    parts.append(CompactInterval(x1, x2))
                continue
            s = (y2 - y1) / (x2 - x1)
            x_star = x1 + (c - y1) / s
            if x1 <= x_star <= x2:
                parts.append(CompactInterval(x_star, x_star))
        if within is not None:
            clipped = []
            for p in parts:
                q = p.intersect(within)
                if q is not None:
                    clipped.append(q)
            parts = clipped
        return merge_components(parts)

    def fixed_points(
        self, within: CompactInterval | None = None
    ) -> tuple[CompactInterval, ...]:
        """Solution set of f(x) = x as closed components."""
        parts: list[CompactInterval] = []
        for (x1, y1), (x2, y2) in zip(self.nodes, self.nodes[1:]):
            s = (y2 - y1) / (x2 - x1)
            if s == 1:
                if y1 == x1:
                    parts.append(CompactInterval(x1, x2))
                continue
            x_star = (y1 - s * x1) / (1 - s)
            if x1 <= x_star <= x2:
                parts.append(CompactInterval(x_star, x_star))
        if within is not None:
            clipped = []
            for p in parts:
                q = p.intersect(within)
                if q is not None:
                    clipped.append(q)
            parts = clipped
        return merge_components(parts)

    def lap_count(self) -> int:
        """Number of maximal pieces of constant slope sign (0 is a sign)."""
        signs = []
        for s in self.slopes():
            signs.append(0 if s == 0 else (1 if s > 0 else -1))
        laps = 1
        for a, b in zip(signs, signs[1:]):
            if a != b:
                laps += 1
        return laps

    def lipschitz_const(self) -> Fraction:
        return max(abs(s) for s in self.slopes())

    def restrict(self, window: CompactInterval) -> "PLMap":
        """Restriction to a subwindow; keeps interior nodes, adds endpoints."""
        if window.lo >= window.hi:
            raise InvariantViolated(f"restriction window degenerate: {window}")
        if not self.domain.contains_interval(window):
            raise OutOfDomain(f"window {window} outside domain {self.domain}")
        nodes: list[Node] = [(window.lo, self(window.lo))]
        for x, y in self.nodes:
            if window.lo < x < window.hi:
                nodes.append((x, y))
        nodes.append((window.hi, self(window.hi)))
        return PLMap(tuple(nodes))

    def reflect(self) -> "PLMap":
        """Conjugation by x -> -x: returns g with g(x) = -f(-x)."""
        return PLMap(tuple((-x, -y) for x, y in reversed(self.nodes)))


def compose(outer: PLMap, inner: PLMap) -> PLMap:
    """outer after inner, with collinear interior nodes removed.

    Raises DomainExceeded when inner's range leaves outer's domain.
    """
    rng = inner.range_on()
    if not outer.domain.contains_interval(rng):
        raise DomainExceeded(
            f"inner range {rng} escapes outer domain {outer.domain}",
            lo=rng.lo,
            hi=rng.hi,
        )
    xs = set(inner.xs)
    for bx in outer.xs:
        for comp in inner.solve_eq(bx):
            xs.add(comp.lo)
            xs.add(comp.hi)
    ordered = sorted(xs)
    raw: list[Node] = [(x, outer(inner(x))) for x in ordered]
    pruned: list[Node] = [raw[0]]
    for i in range(1, len(raw) - 1):
        if _collinear(pruned[-1], raw[i], raw[i + 1]):
            continue
        pruned.append(raw[i])
    pruned.append(raw[-1])
    return PLMap(tuple(pruned))


def iterate_map(f: PLMap, n: int, node_cap: int = 100_000) -> PLMap:
    """f composed with itself n times (n >= 1)."""
    if n < 1:
        raise InvariantViolated(f"iterate count must be >= 1, got {n}")
    result = f
    for _ in range(n - 1):
        result = compose(f, result)
        if len(result.nodes) > node_cap:
            raise PieceExplosion(
                f"iterate grew past {node_cap} nodes ({len(result.nodes)})"
            )
    return result


def monotone_laps(m: PLMap) -> tuple[CompactInterval, ...]:
    """Maximal weakly monotone windows, left to right.

    A new lap starts only where the slope sign strictly reverses; zero-slope
    stretches extend the current lap.
    """
    xs = m.xs
    laps: list[CompactInterval] = []
    start = xs[0]
    last_sign = 0
    for i, s in enumerate(m.slopes()):
        sign = 0 if s == 0 else (1 if s > 0 else -1)
        if sign != 0:
            if last_sign != 0 and sign != last_sign:
                laps.append(CompactInterval(start, xs[i]))
                start = xs[i]
            last_sign = sign
    laps.append(CompactInterval(start, xs[-1]))
    return tuple(laps)


def plmap(points: Sequence[tuple[RationalLike, RationalLike]]) -> PLMap:
    return PLMap(tuple((as_fraction(x), as_fraction(y)) for x, y in points))
