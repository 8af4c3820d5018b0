"""Infinite-piece line maps built from a compact template, exact on windows.

Three tilings share one template contract (template(0) = 1, template(1) = 0,
domain [0,1]):

- MirrorTranslationTiled: x -> -x for x > 0; on each integer tile [n, n+1]
  with n <= -1 the template translated, x -> template(x - floor(x)) - floor(x) - 1.
- DyadicMirrorTiled: x -> -x for x > 0, 0 -> 0; tile I_k = [-2^-k, -2^(-k-1)]
  is carried onto its mirror [2^(-k-1), 2^-k] orientation-preservingly:
  x -> 2^(-k-1) * (1 + template(x * 2^(k+1) + 2)).
- HalfLineTiled: the second iterate of a DyadicMirrorTiled map restricted to
  [0, inf), which collapses to x -> inner(-x) for x > 0 and 0 -> 0.

Windows that touch the dyadic accumulation point 0 cannot be finite PLMaps;
window restriction raises AccumulationPoint there, while image_interval and
the solvers use the self-similar tail hull and stay exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import (
    AccumulationPoint,
    InvariantViolated,
    OutOfDomain,
)
from .exact import (
    CompactInterval,
    RationalLike,
    as_fraction,
    floor_log2,
    fraction_floor,
    merge_components,
    pow2,
)
from .plmap import PLMap

ZERO = Fraction(0)
ONE = Fraction(1)


def _require_template(template: PLMap) -> None:
    if template.domain != CompactInterval(ZERO, ONE):
        raise InvariantViolated(f"template domain must be [0,1], got {template.domain}")
    if template(ZERO) != 1 or template(ONE) != 0:
        raise InvariantViolated(
            "template must map 0 to 1 and 1 to 0 for tile boundaries to join"
        )


def _neg_tile_index(x: Fraction) -> int:
    """k with x in I_k = [-2^-k, -2^(-k-1)]; ties go to the left tile."""
    return -floor_log2(-x) - 1


def _pos_tile_index(x: Fraction) -> int:
    """k with x in [2^(-k-1), 2^-k]; ties go to the outer tile."""
    return -floor_log2(x) - 1


def _ceil_log2(x: Fraction) -> int:
    e = floor_log2(x)
    return e if pow2(e) == x else e + 1


def _clip_components(
    parts: list[CompactInterval], w: CompactInterval
) -> list[CompactInterval]:
    out = []
    for p in parts:
        q = p.intersect(w)
        if q is not None:
            out.append(q)
    return out


@dataclass(frozen=True)
class MirrorTranslationTiled:
    """Full-line map: mirror on the positive ray, translated template tiles
    on the negative ray."""

    template: PLMap

    def __post_init__(self):
        _require_template(self.template)

    def __call__(self, x: RationalLike) -> Fraction:
        x = as_fraction(x)
        if x > 0:
            return -x
        m = fraction_floor(x)
        return self.template(x - m) - m - 1

    @property
    def domain_kind(self) -> str:
        return "full_line"

    def tile_pl(self, n: int) -> PLMap:
        """The tile [n, n+1], n <= -1, as a PLMap."""
        if n > -1:
            raise InvariantViolated(f"tiles live on the negative ray, got n={n}")
        nodes = tuple((n + bx, by - n - 1) for bx, by in self.template.nodes)
        return PLMap(nodes)

    def restrict_window(self, w: CompactInterval) -> PLMap:
        if w.lo >= w.hi:
            raise InvariantViolated(f"window degenerate: {w}")
        xs = {w.lo, w.hi}
        n = fraction_floor(w.lo)
        while n < 0 and Fraction(n) < w.hi:
            for bx in self.template.xs:
                x = n + bx
                if w.lo < x < w.hi and x <= 0:
                    xs.add(x)
            n += 1
        nodes = tuple((x, self(x)) for x in sorted(xs))
        return PLMap(nodes)

    def one_step_image(self, iv: CompactInterval) -> CompactInterval:
        parts: list[CompactInterval] = []
        if iv.hi > 0:
            lo = max(iv.lo, ZERO)
            parts.append(CompactInterval(-iv.hi, -lo))
        if iv.lo <= 0:
            hi = min(iv.hi, ZERO)
            n = fraction_floor(iv.lo)
            while True:
                seg_lo = max(iv.lo, Fraction(n))
                seg_hi = min(hi, Fraction(n + 1))
                if seg_lo > seg_hi or n >= 0:
                    break
                t = CompactInterval(seg_lo - n, seg_hi - n)
                if t.is_point():
                    v = self.template(t.lo) - n - 1
                    parts.append(CompactInterval(v, v))
                else:
                    r = self.template.range_on(t)
                    parts.append(CompactInterval(r.lo - n - 1, r.hi - n - 1))
                n += 1
        out = parts[0]
        for p in parts[1:]:
            out = out.hull(p)
        return out

    def lipschitz(self) -> Fraction:
        return max(ONE, self.template.lipschitz_const())

    def fixed_points_in(self, w: CompactInterval) -> tuple[CompactInterval, ...]:
        return self.restrict_window(w).fixed_points()

    def solve_in(
        self, c: RationalLike, w: CompactInterval
    ) -> tuple[CompactInterval, ...]:
        return self.restrict_window(w).solve_eq(c)


@dataclass(frozen=True)
class DyadicMirrorTiled:
    """Full-line map: mirror on the positive ray, self-similar dyadic tiles
    on the negative ray, 0 fixed by the continuity extension."""

    template: PLMap

    def __post_init__(self):
        _require_template(self.template)
        # Boundary agreement between adjacent tiles and the vanishing tail
        # are consequences of the template contract; certify them anyway for
        # |k| <= 20 so a formula edit cannot silently break the gluing.
        r = self.template.range_on()
        for k in range(-20, 21):
            right = pow2(-k - 1)
            from_k = right * (1 + self.template(ONE))
            from_next = pow2(-k - 2) * (1 + self.template(ZERO))
            if from_k != right or from_next != right:
                raise InvariantViolated(f"tile boundary mismatch at k={k}")
            width = pow2(-k - 1) * max(abs(1 + r.lo), abs(1 + r.hi))
            if not width <= pow2(-k) * max(abs(1 + r.lo), abs(1 + r.hi)):
                raise InvariantViolated("tile image tail fails to shrink")

    @property
    def domain_kind(self) -> str:
        return "full_line"

    def _template_range(self) -> CompactInterval:
        return self.template.range_on()

    def __call__(self, x: RationalLike) -> Fraction:
        x = as_fraction(x)
        if x > 0:
            return -x
        if x == 0:
            return ZERO
        k = _neg_tile_index(x)
        t = x * pow2(k + 1) + 2
        return pow2(-k - 1) * (1 + self.template(t))

    def tile_pl(self, k: int) -> PLMap:
        s = pow2(-k - 1)
        nodes = tuple(((bx - 2) * s, s * (1 + by)) for bx, by in self.template.nodes)
        return PLMap(nodes)

    def restrict_window(self, w: CompactInterval) -> PLMap:
        if w.lo >= w.hi:
            raise InvariantViolated(f"window degenerate: {w}")
        if w.lo >= 0:
            return PLMap(((w.lo, -w.lo), (w.hi, -w.hi)))
        if w.hi >= 0:
            raise AccumulationPoint(
                f"window {w} touches the tile accumulation point 0 from the left"
            )
        xs = {w.lo, w.hi}
        for k in range(_neg_tile_index(w.lo), _neg_tile_index(w.hi) + 1):
            s = pow2(-k - 1)
            for bx in self.template.xs:
                x = (bx - 2) * s
                if w.lo < x < w.hi:
                    xs.add(x)
        nodes = tuple((x, self(x)) for x in sorted(xs))
        return PLMap(nodes)

    def _tile_seg_image(self, k: int, seg: CompactInterval) -> CompactInterval:
        s = pow2(-k - 1)
        t = CompactInterval(seg.lo * pow2(k + 1) + 2, seg.hi * pow2(k + 1) + 2)
        if t.is_point():
            v = s * (1 + self.template(t.lo))
            return CompactInterval(v, v)
        r = self.template.range_on(t)
        return CompactInterval(s * (1 + r.lo), s * (1 + r.hi))

    def one_step_image(self, iv: CompactInterval) -> CompactInterval:
        parts: list[CompactInterval] = []
        if iv.hi > 0:
            lo = max(iv.lo, ZERO)
            parts.append(CompactInterval(-iv.hi, -lo))
        if iv.lo < 0:
            hi = min(iv.hi, ZERO)
            k_a = _neg_tile_index(iv.lo)
            if hi == 0:
                tile_hi = -pow2(-k_a - 1)
                parts.append(
                    self._tile_seg_image(k_a, CompactInterval(iv.lo, tile_hi))
                )
                r = self._template_range()
                s1 = pow2(-k_a - 2)
                tail_lo = s1 * (1 + r.lo)
                tail_hi = s1 * (1 + r.hi)
                parts.append(
                    CompactInterval(min(ZERO, tail_lo), max(ZERO, tail_hi))
                )
            else:
                for k in range(k_a, _neg_tile_index(hi) + 1):
                    seg_lo = max(iv.lo, -pow2(-k))
                    seg_hi = min(hi, -pow2(-k - 1))
                    if seg_lo > seg_hi:
                        continue
                    parts.append(
                        self._tile_seg_image(k, CompactInterval(seg_lo, seg_hi))
                    )
        if iv.lo <= 0 <= iv.hi:
            parts.append(CompactInterval(ZERO, ZERO))
        out = parts[0]
        for p in parts[1:]:
            out = out.hull(p)
        return out

    def lipschitz(self) -> Fraction:
        return max(ONE, self.template.lipschitz_const())

    def fixed_points_in(self, w: CompactInterval) -> tuple[CompactInterval, ...]:
        if w.hi < 0 or w.lo >= 0:
            return self.restrict_window(w).fixed_points()
        # w.lo < 0 <= w.hi: by homogeneity, one fixed point in any full tile
        # replicates into every tile, accumulating at 0.
        if self.tile_pl(0).fixed_points():
            raise AccumulationPoint(
                "fixed points in the dyadic tiles accumulate at 0"
            )
        return (CompactInterval(ZERO, ZERO),)

    def solve_in(
        self, c: RationalLike, w: CompactInterval
    ) -> tuple[CompactInterval, ...]:
        c = as_fraction(c)
        parts: list[CompactInterval] = []
        if w.hi >= 0 and -c >= 0 and -c in w and max(w.lo, ZERO) <= -c:
            parts.append(CompactInterval(-c, -c))
        if w.lo < 0:
            r = self._template_range()
            lo1, hi1 = 1 + r.lo, 1 + r.hi
            k_lo = _neg_tile_index(w.lo)
            k_hi = _neg_tile_index(w.hi) if w.hi < 0 else None
            if c == 0:
                if self.template.solve_eq(-1):
                    if w.hi >= 0:
                        raise AccumulationPoint(
                            "solutions in the dyadic tiles accumulate at 0"
                        )
                    ks = range(k_lo, k_hi + 1)
                    for k in ks:
                        for comp in self.tile_pl(k).solve_eq(ZERO):
                            parts.append(comp)
            else:
                # Tile k can host a solution only when c * 2^(k+1) lands in
                # [1 + min template, 1 + max template]; that caps k whenever
                # c != 0, so the loop below is finite even for windows that
                # reach the accumulation point.
                k_cap = None
                k_floor = None
                if c > 0:
                    if hi1 > 0:
                        k_cap = floor_log2(hi1 / c) - 1
                    if lo1 > 0:
                        k_floor = _ceil_log2(lo1 / c) - 1
                    if hi1 <= 0:
                        k_cap = k_lo - 1
                else:
                    if lo1 < 0:
                        k_cap = floor_log2(lo1 / c) - 1
                    else:
                        k_cap = k_lo - 1
                start = k_lo if k_floor is None else max(k_lo, k_floor)
                end = k_cap if k_hi is None else (
                    k_hi if k_cap is None else min(k_hi, k_cap)
                )
                if end is None:
                    end = start - 1
                for k in range(start, end + 1):
                    for comp in self.tile_pl(k).solve_eq(c):
                        parts.append(comp)
        return merge_components(_clip_components(parts, w))


@dataclass(frozen=True)
class HalfLineTiled:
    """Second iterate of a dyadic mirror map, restricted to [0, inf)."""

    inner: DyadicMirrorTiled

    def __post_init__(self):
        r = self.inner.template.range_on()
        if not 1 + r.lo > 0:
            raise InvariantViolated(
                "half-line restriction needs tile images inside (0, inf): "
                f"1 + min template = {1 + r.lo} <= 0"
            )

    @property
    def template(self) -> PLMap:
        return self.inner.template

    @property
    def domain_kind(self) -> str:
        return "half_line"

    def __call__(self, x: RationalLike) -> Fraction:
        x = as_fraction(x)
        if x < 0:
            raise OutOfDomain(f"{x} outside the half line [0, inf)")
        if x == 0:
            return ZERO
        return self.inner(-x)

    def tile_pl(self, k: int) -> PLMap:
        s = pow2(-k - 1)
        nodes = tuple(
            ((2 - bx) * s, s * (1 + by))
            for bx, by in reversed(self.template.nodes)
        )
        return PLMap(nodes)

    def restrict_window(self, w: CompactInterval) -> PLMap:
        if w.lo >= w.hi:
            raise InvariantViolated(f"window degenerate: {w}")
        if w.lo < 0:
            raise OutOfDomain(f"window {w} leaves the half line")
        if w.lo == 0:
            raise AccumulationPoint(
                f"window {w} touches the tile accumulation point 0"
            )
        xs = {w.lo, w.hi}
        for k in range(_pos_tile_index(w.hi), _pos_tile_index(w.lo) + 1):
            s = pow2(-k - 1)
            for bx in self.template.xs:
                x = (2 - bx) * s
                if w.lo < x < w.hi:
                    xs.add(x)
        nodes = tuple((x, self(x)) for x in sorted(xs))
        return PLMap(nodes)

    def _tile_seg_image(self, k: int, seg: CompactInterval) -> CompactInterval:
        s = pow2(-k - 1)
        t = CompactInterval(2 - seg.hi * pow2(k + 1), 2 - seg.lo * pow2(k + 1))
        if t.is_point():
            v = s * (1 + self.template(t.lo))
            return CompactInterval(v, v)
        r = self.template.range_on(t)
        return CompactInterval(s * (1 + r.lo), s * (1 + r.hi))

    def one_step_image(self, iv: CompactInterval) -> CompactInterval:
        if iv.lo < 0:
            raise OutOfDomain(f"interval {iv} leaves the half line")
        parts: list[CompactInterval] = []
        if iv.lo == 0:
            parts.append(CompactInterval(ZERO, ZERO))
            if iv.hi > 0:
                k_b = _pos_tile_index(iv.hi)
                parts.append(
                    self._tile_seg_image(
                        k_b, CompactInterval(pow2(-k_b - 1), iv.hi)
                    )
                )
                r = self.template.range_on()
                s1 = pow2(-k_b - 2)
                parts.append(CompactInterval(ZERO, s1 * (1 + r.hi)))
        else:
            for k in range(_pos_tile_index(iv.hi), _pos_tile_index(iv.lo) + 1):
                seg_lo = max(iv.lo, pow2(-k - 1))
                seg_hi = min(iv.hi, pow2(-k))
                if seg_lo > seg_hi:
                    continue
                parts.append(
                    self._tile_seg_image(k, CompactInterval(seg_lo, seg_hi))
                )
        out = parts[0]
        for p in parts[1:]:
            out = out.hull(p)
        return out

    def lipschitz(self) -> Fraction:
        return self.template.lipschitz_const()

    def fixed_points_in(self, w: CompactInterval) -> tuple[CompactInterval, ...]:
        if w.lo < 0:
            raise OutOfDomain(f"window {w} leaves the half line")
        if w.lo == 0:
            if w.hi == 0:
                return (CompactInterval(ZERO, ZERO),)
            if self.tile_pl(0).fixed_points():
                raise AccumulationPoint(
                    "fixed points in the dyadic tiles accumulate at 0"
                )
            return (CompactInterval(ZERO, ZERO),)
        return self.restrict_window(w).fixed_points()

    def solve_in(
        self, c: RationalLike, w: CompactInterval
    ) -> tuple[CompactInterval, ...]:
        if w.lo < 0:
            raise OutOfDomain(f"window {w} leaves the half line")
        c = as_fraction(c)
        parts: list[CompactInterval] = []
        if c == 0:
            if w.lo == 0:
                parts.append(CompactInterval(ZERO, ZERO))
        elif c > 0:
            r = self.template.range_on()
            lo1, hi1 = 1 + r.lo, 1 + r.hi
            k_floor = _ceil_log2(lo1 / c) - 1
            k_cap = floor_log2(hi1 / c) - 1
            start = max(k_floor, _pos_tile_index(w.hi))
            end = k_cap if w.lo == 0 else min(k_cap, _pos_tile_index(w.lo))
            for k in range(start, end + 1):
                for comp in self.tile_pl(k).solve_eq(c):
                    parts.append(comp)
        return merge_components(_clip_components(parts, w))


TiledLineMap = Union[MirrorTranslationTiled, DyadicMirrorTiled, HalfLineTiled]


@dataclass(frozen=True)
class DyadicCompactification:
    """Conjugation of a MirrorTranslationTiled map to [0,1].

    h is the increasing piecewise-affine bijection R -> (0,1) with
    h(-m) = 2^(-m-1) and h(n) = 1 - 2^(-n-1); the conjugate map fbar equals
    h . F . h^-1 on (0,1), extended by fbar(0) = 1 and fbar(1) = 0.
    """

    base: MirrorTranslationTiled

    @property
    def domain_kind(self) -> str:
        return "unit"

    @staticmethod
    def h_at_int(n: int) -> Fraction:
        if n >= 0:
            return 1 - pow2(-n - 1)
        return pow2(n - 1)

    def h(self, x: RationalLike) -> Fraction:
        x = as_fraction(x)
        n = fraction_floor(x)
        lo = self.h_at_int(n)
        hi = self.h_at_int(n + 1)
        return lo + (x - n) * (hi - lo)

    def h_inv(self, u: RationalLike) -> Fraction:
        u = as_fraction(u)
        if not 0 < u < 1:
            raise OutOfDomain(f"h maps onto (0,1); {u} has no preimage")
        if u == Fraction(1, 2):
            return ZERO
        if u < Fraction(1, 2):
            m = -floor_log2(u) - 2
            return u * pow2(m + 2) - m - 2
        n = -floor_log2(1 - u) - 2
        return n + (u - self.h_at_int(n)) * pow2(n + 2)

    def __call__(self, u: RationalLike) -> Fraction:
        u = as_fraction(u)
        if u == 0:
            return ONE
        if u == 1:
            return ZERO
        return self.h(self.base(self.h_inv(u)))

    def _ray_min_below(self, x2: Fraction) -> Fraction:
        """Exact min of base over (-inf, x2]."""
        if x2 > 0:
            tmin = self.base.template.range_on().lo
            return min(-x2, tmin)
        n = fraction_floor(x2)
        parts = [self.base.one_step_image(CompactInterval(Fraction(n), x2)).lo]
        if x2 == n:
            parts = []
        tmin = self.base.template.range_on().lo
        # Nearest full tile [n-1, n] dominates: deeper tiles only shift up.
        parts.append(-(n - 1) - 2 + tmin + 1)
        return min(parts)

    def _ray_max_above(self, x1: Fraction) -> Fraction:
        """Exact max of base over [x1, inf)."""
        if x1 >= 0:
            return -x1
        return max(
            self.base.one_step_image(CompactInterval(x1, ZERO)).hi, ZERO
        )

    def one_step_image(self, iv: CompactInterval) -> CompactInterval:
        if iv.lo < 0 or iv.hi > 1:
            raise OutOfDomain(f"interval {iv} leaves [0,1]")
        if iv.lo == 0 and iv.hi == 1:
            return CompactInterval(ZERO, ONE)
        if iv.lo == 0:
            if iv.hi == 0:
                return CompactInterval(ONE, ONE)
            m_inf = self._ray_min_below(self.h_inv(iv.hi))
            return CompactInterval(self.h(m_inf), ONE)
        if iv.hi == 1:
            m_sup = self._ray_max_above(self.h_inv(iv.lo))
            return CompactInterval(ZERO, self.h(m_sup))
        img = self.base.one_step_image(
            CompactInterval(self.h_inv(iv.lo), self.h_inv(iv.hi))
        )
        return CompactInterval(self.h(img.lo), self.h(img.hi))

    def restrict_window(self, w: CompactInterval) -> PLMap:
        if not (0 < w.lo < w.hi < 1):
            raise AccumulationPoint(
                f"window {w} touches an endpoint; pieces accumulate there"
            )
        xw = CompactInterval(self.h_inv(w.lo), self.h_inv(w.hi))
        g = self.base.restrict_window(xw)
        xs = set(g.xs)
        rng = g.range_on()
        n = fraction_floor(rng.lo)
        while Fraction(n) <= rng.hi:
            for comp in g.solve_eq(Fraction(n)):
                xs.add(comp.lo)
                xs.add(comp.hi)
            n += 1
        nodes = tuple((self.h(x), self.h(g(x))) for x in sorted(xs))
        return PLMap(nodes)

    def lipschitz(self) -> Fraction:
        """Certified upper bound (tile-slope-ratio argument), not the sup."""
        tmin = self.base.template.range_on().lo
        shift = -fraction_floor(tmin)
        return max(ONE, pow2(shift) * self.base.template.lipschitz_const())

    def _base_fixed_points(self) -> tuple[CompactInterval, ...]:
        tmin = self.base.template.range_on().lo
        depth = fraction_floor((2 - tmin) / 2) + 1
        return self.base.fixed_points_in(CompactInterval(Fraction(-depth), ONE))

    def fixed_points_in(self, w: CompactInterval) -> tuple[CompactInterval, ...]:
        # Endpoints form a 2-cycle, never fixed; interior fixed points are
        # h-images of the base map's, which all live within finitely many
        # tiles (the tile equation template(t) - t = 1 - 2m caps m).
        parts = [
            CompactInterval(self.h(comp.lo), self.h(comp.hi))
            for comp in self._base_fixed_points()
        ]
        return merge_components(_clip_components(parts, w))

    def solve_in(
        self, c: RationalLike, w: CompactInterval
    ) -> tuple[CompactInterval, ...]:
        c = as_fraction(c)
        parts: list[CompactInterval] = []
        if c == 1 and ZERO in w:
            parts.append(CompactInterval(ZERO, ZERO))
        if c == 0 and ONE in w:
            parts.append(CompactInterval(ONE, ONE))
        if 0 < c < 1:
            v = self.h_inv(c)
            tr = self.base.template.range_on()
            xs: list[CompactInterval] = []
            if -v >= 0:
                xs.append(CompactInterval(-v, -v))
            m_lo = fraction_floor(v + 1 - tr.hi)
            m_hi = fraction_floor(v + 1 - tr.lo) + 1
            for m in range(max(1, m_lo), m_hi + 1):
                for comp in self.base.tile_pl(-m).solve_eq(v):
                    xs.append(comp)
            for comp in xs:
                parts.append(CompactInterval(self.h(comp.lo), self.h(comp.hi)))
        return merge_components(_clip_components(parts, w))


def compactify(m: MirrorTranslationTiled) -> DyadicCompactification:
    """Build the conjugate map after certifying endpoint continuity.

    The image of the m-th negative tile spans value tiles whose indices grow
    by exactly one per step, so the conjugate map is continuous at 0; the
    positive ray mirrors to indices diverging the other way.
    """
    _require_template(m.template)
    r = m.template.range_on()
    prev = None
    for depth in range(1, 21):
        lo_idx = fraction_floor(depth - 1 + r.lo)
        if prev is not None and lo_idx != prev + 1:
            raise InvariantViolated(
                f"tile image indices fail to diverge at depth {depth}"
            )
        prev = lo_idx
    return DyadicCompactification(m)


LineLike = Union[TiledLineMap, DyadicCompactification]


def eval_line(m: LineLike, x: RationalLike) -> Fraction:
    return m(x)


def restrict_window(m: LineLike, w: CompactInterval) -> PLMap:
    return m.restrict_window(w)


def image_interval(m: LineLike, k: CompactInterval, n: int = 1) -> CompactInterval:
    if n < 1:
        raise InvariantViolated(f"step count must be >= 1, got {n}")
    out = k
    for _ in range(n):
        out = m.one_step_image(out)
    return out


def global_lipschitz(m: LineLike) -> Fraction:
    return m.lipschitz()


def fixed_points_line(m: LineLike, w: CompactInterval) -> tuple[CompactInterval, ...]:
    return m.fixed_points_in(w)


def solve_line(
    m: LineLike, c: RationalLike, w: CompactInterval
) -> tuple[CompactInterval, ...]:
    return m.solve_in(c, w)
