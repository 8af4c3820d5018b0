"""Specification-property tooling: periodic-point censuses, exact travel-time
tables, refutation certificates for the line and half-line families, and a
bounded trace search on compact-domain maps.

The refutation argument is quantitative: a point eps-close to 0 needs a
number of steps growing with n to reach an eps-neighborhood of the orbit of
n + 1, because one step moves points by a bounded amount.  A map with the
specification property would glue those two orbit segments within a uniform
gap, so unbounded travel times rule the property out.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Optional, Sequence, Union

from .errors import InvariantViolated, NotApplicable
from .exact import (
    CompactInterval,
    RationalLike,
    as_fraction,
    merge_components,
    pow2,
)
from .linemap import (
    DyadicCompactification,
    DyadicMirrorTiled,
    HalfLineTiled,
    MirrorTranslationTiled,
)
from .maps import ExactMap, as_exact_map
from .plmap import PLMap, compose

TRAVEL_STEP_CAP = 1000
DISPLACEMENT_RANGE = range(1, 17)


# ---------------------------------------------------------------------------
# instances and certificates


@dataclass(frozen=True)
class Target:
    """One orbit segment to trace: stay eps-close to the orbit of `point`
    for all times in [start, end]."""

    point: Fraction
    start: int
    end: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "point", as_fraction(self.point))
        if not 0 <= self.start <= self.end:
            raise InvariantViolated(f"bad time window [{self.start}, {self.end}]")


@dataclass(frozen=True)
class SpecInstance:
    """A finite family of orbit segments separated by at least `gap` steps."""

    targets: tuple[Target, ...]
    eps: Fraction
    gap: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "eps", as_fraction(self.eps))
        object.__setattr__(self, "targets", tuple(self.targets))
        if self.eps <= 0:
            raise InvariantViolated("eps must be positive")
        if not self.targets:
            raise InvariantViolated("at least one target segment required")
        if self.targets[0].start != 0:
            raise InvariantViolated("the first window must start at time 0")
        for prev, cur in zip(self.targets, self.targets[1:]):
            if cur.start <= prev.end:
                raise InvariantViolated("target windows must be ordered and disjoint")
            if cur.start - prev.end < self.gap:
                raise InvariantViolated(
                    f"window gap {cur.start - prev.end} below required {self.gap}"
                )

    @property
    def horizon(self) -> int:
        return self.targets[-1].end


@dataclass(frozen=True)
class TravelEntry:
    n: int
    steps: Optional[int]


@dataclass(frozen=True)
class DisplacementCheck:
    n: int
    image: CompactInterval
    bound: CompactInterval
    ok: bool


@dataclass(frozen=True)
class RefutationCertificate:
    map_id: str
    scale: str
    eps: Fraction
    table: tuple[TravelEntry, ...]
    displacement: tuple[DisplacementCheck, ...]
    growth_bound: str
    growth_ok: bool
    contradicts: str


@dataclass(frozen=True)
class NotRefuted:
    reason: str


@dataclass(frozen=True)
class NotFound:
    reason: str
    depth: int


# ---------------------------------------------------------------------------
# periodic points


def periodic_points(
    m: Union[ExactMap, PLMap, object], period: int, window: CompactInterval
) -> tuple[CompactInterval, ...]:
    """Solution components of f^period(x) = x inside the window."""
    if period < 1:
        raise InvariantViolated(f"period {period} below 1")
    em = as_exact_map(m)
    return em.materialize(window, period).fixed_points()


# ---------------------------------------------------------------------------
# travel-time tables


def _linear_targets(n: int, eps: Fraction) -> tuple[Fraction, Fraction]:
    """Meet thresholds for the 2-periodic orbit {n+1, -(n+1)}."""
    return Fraction(n + 1) - eps, Fraction(-(n + 1)) + eps


def _linear_table(
    em: ExactMap, eps: Fraction, ns: Sequence[int]
) -> tuple[tuple[TravelEntry, ...], tuple[DisplacementCheck, ...]]:
    entries: dict[int, Optional[int]] = {}
    remaining = set(ns)
    ball = CompactInterval(-eps, eps)
    for n in sorted(remaining):
        hi_meet, lo_meet = _linear_targets(n, eps)
        if ball.hi >= hi_meet or ball.lo <= lo_meet:
            entries[n] = 0
            remaining.discard(n)
    cur = ball
    for m in range(1, TRAVEL_STEP_CAP + 1):
        if not remaining:
            break
        cur = em.image(cur, 1)
        for n in sorted(remaining):
            hi_meet, lo_meet = _linear_targets(n, eps)
            if cur.hi >= hi_meet or cur.lo <= lo_meet:
                entries[n] = m
                remaining.discard(n)
    table = tuple(TravelEntry(n, entries.get(n)) for n in sorted(set(ns)))
    checks = []
    for n in DISPLACEMENT_RANGE:
        img = em.image(CompactInterval(Fraction(-n), Fraction(n)), 1)
        bound = CompactInterval(Fraction(-n - 1), Fraction(n + 1))
        checks.append(DisplacementCheck(n, img, bound, bound.contains_interval(img)))
    return table, tuple(checks)


def _dyadic_table(
    em: ExactMap, eps: Fraction, ns: Sequence[int]
) -> tuple[tuple[TravelEntry, ...], tuple[DisplacementCheck, ...]]:
    """Half-line variant with scale distance: neighborhoods are
    multiplicative, targets are the fixed points at powers of two."""
    entries: dict[int, Optional[int]] = {}
    remaining = set(ns)
    cur = CompactInterval(1 / (1 + eps), 1 + eps)
    for n in sorted(remaining):
        if cur.hi >= pow2(n + 1) / (1 + eps):
            entries[n] = 0
            remaining.discard(n)
    for m in range(1, TRAVEL_STEP_CAP + 1):
        if not remaining:
            break
        cur = em.image(cur, 1)
        for n in sorted(remaining):
            if cur.hi >= pow2(n + 1) / (1 + eps):
                entries[n] = m
                remaining.discard(n)
    table = tuple(TravelEntry(n, entries.get(n)) for n in sorted(set(ns)))
    checks = []
    for n in DISPLACEMENT_RANGE:
        img = em.image(CompactInterval(pow2(-n), pow2(n)), 1)
        bound = CompactInterval(pow2(-n - 2), pow2(n + 1))
        checks.append(DisplacementCheck(n, img, bound, bound.contains_interval(img)))
    return table, tuple(checks)


def travel_time_table(
    m: Union[ExactMap, object],
    eps: RationalLike = Fraction(1, 2),
    n_range: Sequence[int] = range(2, 9),
) -> RefutationCertificate:
    """Exact travel times t(n) from the eps-ball at the fixed point to the
    eps-neighborhood of the orbit of the n-th reference point, plus the
    per-step displacement lemma behind the growth bound."""
    em = as_exact_map(m)
    eps = as_fraction(eps)
    if eps <= 0:
        raise InvariantViolated("eps must be positive")
    ns = sorted(set(int(n) for n in n_range))
    if not ns or ns[0] < 1:
        raise InvariantViolated("n_range must contain integers >= 1")
    obj = em.obj
    if isinstance(obj, MirrorTranslationTiled):
        table, checks = _linear_table(em, eps, ns)
        growth_bound = "t(n) >= n - 1"
        growth_ok = all(e.steps is not None and e.steps >= e.n - 1 for e in table)
        contradicts = (
            "two-segment instances with y1 = 0 on [0, 0] and y2 = n + 1 on "
            "[N, N]: any uniform gap N is beaten by n with t(n) > N"
        )
        scale = "linear"
    elif isinstance(obj, HalfLineTiled):
        table, checks = _dyadic_table(em, eps, ns)
        growth_bound = "t(n) >= ceil((n - 1) / 2)"
        growth_ok = all(
            e.steps is not None and e.steps >= ceil((e.n - 1) / 2) for e in table
        )
        contradicts = (
            "two-segment instances with y1 = 1 on [0, 0] and y2 = 2^(n+1) on "
            "[N, N] under the scale distance |log2 x - log2 y|: any uniform "
            "gap N is beaten by n with t(n) > N"
        )
        scale = "dyadic"
    else:
        raise NotApplicable(
            "travel-time tables are defined for the mirror-translation and "
            "half-line tiled families"
        )
    growth_ok = growth_ok and all(c.ok for c in checks)
    return RefutationCertificate(
        map_id=em.map_id,
        scale=scale,
        eps=eps,
        table=table,
        displacement=checks,
        growth_bound=growth_bound,
        growth_ok=growth_ok,
        contradicts=contradicts,
    )


def refute_specification(
    m: Union[ExactMap, object], eps: Optional[RationalLike] = None
) -> Union[RefutationCertificate, NotRefuted]:
    """Certificate of unbounded gluing times, or NotRefuted.

    NotRefuted makes no positive claim; it only reports that this
    quantitative obstruction is absent.
    """
    em = as_exact_map(m)
    obj = em.obj
    if isinstance(obj, DyadicCompactification):
        return NotRefuted(
            "compact domain of diameter 1: travel times are uniformly "
            "bounded, so the unbounded-gluing obstruction is absent"
        )
    if isinstance(obj, DyadicMirrorTiled):
        raise NotApplicable(
            "orbits alternate sign every step; the scale-distance refutation "
            "lives on the half-line second-iterate map"
        )
    eps_f = Fraction(1, 2) if eps is None else as_fraction(eps)
    cert = travel_time_table(em, eps_f, range(2, 9))
    if cert.growth_ok:
        return cert
    return NotRefuted(
        "travel times did not exhibit the certified growth on the tested range"
    )


# ---------------------------------------------------------------------------
# trace search


def _pl_preimage(g: PLMap, lo: Fraction, hi: Fraction) -> tuple[CompactInterval, ...]:
    """Exact solution set of lo <= g(x) <= hi."""
    parts: list[CompactInterval] = []
    for (x1, y1), (x2, y2) in zip(g.nodes, g.nodes[1:]):
        seg_lo, seg_hi = min(y1, y2), max(y1, y2)
        if seg_hi < lo or seg_lo > hi:
            continue
        if y1 == y2:
            parts.append(CompactInterval(x1, x2))
            continue
        slope = (y2 - y1) / (x2 - x1)
        a = x1 + (max(lo, seg_lo) - y1) / slope
        b = x1 + (min(hi, seg_hi) - y1) / slope
        parts.append(CompactInterval(min(a, b), max(a, b)))
    return merge_components(parts)


def _intersect_components(
    parts: Sequence[CompactInterval], other: Sequence[CompactInterval]
) -> tuple[CompactInterval, ...]:
    out = []
    for a in parts:
        for b in other:
            if a.intersects(b):
                out.append(a.intersect(b))
    return merge_components(out)


@dataclass(frozen=True)
class _Tube:
    time: int
    lo: Optional[Fraction]  # None when the domain edge already enforces it
    hi: Optional[Fraction]

    def clip(self, w: CompactInterval) -> CompactInterval:
        lo = w.lo if self.lo is None else max(self.lo, w.lo)
        hi = w.hi if self.hi is None else min(self.hi, w.hi)
        if lo > hi:
            return CompactInterval(w.lo, w.lo)  # empty marker handled by caller
        return CompactInterval(lo, hi)

    def is_empty_in(self, w: CompactInterval) -> bool:
        lo = w.lo if self.lo is None else max(self.lo, w.lo)
        hi = w.hi if self.hi is None else min(self.hi, w.hi)
        return lo > hi


def _tubes(
    em: ExactMap, inst: SpecInstance, domain: CompactInterval, shrink: Fraction
) -> list[_Tube]:
    """Closed tubes around the target orbits, shrunk so that membership in
    the closed tube implies the strict eps inequality."""
    tubes: list[_Tube] = []
    eps = inst.eps * (1 - shrink)
    for target in inst.targets:
        point = target.point
        if point not in domain:
            raise InvariantViolated(f"target point {point} outside {domain}")
        center = point
        for i in range(0, target.end + 1):
            if i >= target.start:
                lo = center - eps
                hi = center + eps
                tubes.append(
                    _Tube(
                        time=i,
                        lo=lo if lo > domain.lo else None,
                        hi=hi if hi < domain.hi else None,
                    )
                )
            if i < target.end:
                center = em(center)
    tubes.sort(key=lambda t: t.time)
    return tubes


def _strict_ok(img: CompactInterval, tube: _Tube) -> bool:
    if tube.lo is not None and img.lo <= tube.lo:
        return False
    if tube.hi is not None and img.hi >= tube.hi:
        return False
    return True


def _reverify(em: ExactMap, comp: CompactInterval, tubes: Sequence[_Tube]) -> bool:
    """Exact forward interval propagation against the strict tubes."""
    by_time: dict[int, list[_Tube]] = {}
    for tube in tubes:
        by_time.setdefault(tube.time, []).append(tube)
    horizon = max(by_time)
    cur = comp
    for i in range(0, horizon + 1):
        for tube in by_time.get(i, ()):  # strict against the true eps edges
            if not _strict_ok(cur, tube):
                return False
        if i < horizon:
            cur = em.image(cur, 1)
    return True


def _search_window(em: ExactMap, inst: SpecInstance) -> CompactInterval:
    obj = em.obj
    if isinstance(obj, PLMap):
        return obj.domain
    if isinstance(obj, DyadicCompactification):
        first = inst.targets[0]
        edges = [first.point - inst.eps, first.point + inst.eps]
        coords = [Fraction(0)]
        for e in edges:
            if 0 < e < 1:
                coords.append(abs(obj.h_inv(e)))
        if not 0 < first.point < 1:
            raise NotApplicable(
                "trace search needs the first target in the open interval"
            )
        bound = max(coords + [abs(obj.h_inv(first.point))])
        depth = inst.horizon
        m_clip = int(ceil(bound)) + depth + 2
        return CompactInterval(obj.h(Fraction(-m_clip)), obj.h(Fraction(m_clip)))
    raise NotApplicable("trace search needs a compact-domain evaluable map")


def trace_search(
    m: Union[ExactMap, PLMap, object], inst: SpecInstance, depth: int
) -> Union[CompactInterval, NotFound]:
    """Exhaustive tube-pullback search for an eps-tracing interval.

    Returns a rational interval all of whose points strictly eps-trace every
    target segment, or NotFound.  NotFound is a bounded-scope verdict for the
    searched window and depth, not a disproof.
    """
    em = as_exact_map(m)
    if inst.horizon > depth:
        raise InvariantViolated(
            f"instance windows reach time {inst.horizon}, beyond depth {depth}"
        )
    window = _search_window(em, inst)
    domain = em.domain
    if domain is None:
        raise NotApplicable("trace search needs a compact-domain evaluable map")
    tubes = _tubes(em, inst, domain, Fraction(1, 1024))
    strict_tubes = _tubes(em, inst, domain, Fraction(0))
    horizon = inst.horizon
    # time-0 constraints cut the initial survivor set
    survivors: tuple[CompactInterval, ...] = (window,)
    for tube in tubes:
        if tube.time != 0:
            continue
        if tube.is_empty_in(window):
            return NotFound("a tube is empty inside the search window", depth)
        clipped = tube.clip(window)
        survivors = _intersect_components(survivors, (clipped,))
    if not survivors:
        return NotFound("no point satisfies the time-0 tubes", depth)
    g: Optional[PLMap] = None
    for i in range(1, horizon + 1):
        hull = CompactInterval(survivors[0].lo, survivors[-1].hi)
        if hull.is_point():
            # constant survivor: check the remaining times pointwise
            orbit = hull.lo
            ok = True
            for j in range(0, horizon + 1):
                for tube in tubes:
                    if tube.time == j and not _strict_ok(
                        CompactInterval(orbit, orbit), tube
                    ):
                        ok = False
                if j < horizon:
                    orbit = em(orbit)
            if ok and _reverify(em, hull, strict_tubes):
                return hull
            return NotFound("survivor set collapsed to a failing point", depth)
        if g is None:
            g = em.restrict(hull)
        else:
            inner = g.restrict(hull)
            rng = inner.range_on()
            if rng.is_point():
                v = em(rng.lo)
                g = PLMap(((inner.domain.lo, v), (inner.domain.hi, v)))
            else:
                g = compose(em.restrict(rng), inner)
        step_tubes = [t for t in tubes if t.time == i]
        for tube in step_tubes:
            pre = _pl_preimage(
                g,
                tube.lo if tube.lo is not None else g.range_on().lo,
                tube.hi if tube.hi is not None else g.range_on().hi,
            )
            survivors = _intersect_components(survivors, pre)
            if not survivors:
                return NotFound(
                    f"no cylinder survives the tube at time {i}", depth
                )
    for comp in survivors:
        if _reverify(em, comp, strict_tubes):
            return comp
        shrunk = comp.middle_half()
        if not shrunk.is_point() and _reverify(em, shrunk, strict_tubes):
            return shrunk
    return NotFound("survivors failed the strict re-verification", depth)
