"""Quasihorseshoe certificates.

A certificate names a base interval J, an ordered collection of pieces
inside J with pairwise disjoint interiors, and an iterate n; it asserts
that f^n maps every piece onto a superset of J.  This module provides the
exact verifier, the loosening pass that shrinks pieces to tightest
monotone pullbacks of J, the swap/bitransitivity dichotomy around a
unique fixed point, three constructive certificate finders, and bounded
amplification that multiplies branch counts at higher iterates.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional, Union

from .errors import (
    AccumulationPoint,
    ConstructionFailed,
    DomainExceeded,
    InvariantViolated,
    NotApplicable,
    NotLoose,
    OutOfDomain,
    PieceExplosion,
    UncertifiedInput,
)
from .exact import CompactInterval, merge_components, union_covers
from .linemap import DyadicMirrorTiled, HalfLineTiled
from .maps import ExactMap, as_exact_map
from .plmap import PLMap, monotone_laps

Piece = tuple[CompactInterval, ...]


@dataclass(frozen=True)
class QuasiHorseshoe:
    base: CompactInterval
    pieces: tuple[Piece, ...]
    iterate: int
    map_id: str = ""
    kind: str = field(default="", compare=False)

    @property
    def s(self) -> int:
        return len(self.pieces)


@dataclass(frozen=True)
class TightReport:
    """Every piece maps exactly onto the base and the pieces tile it.

    For a map that is transitive on an open or half-open interval this is
    contradiction evidence: such a map admits only loose certificates.
    """

    base: CompactInterval
    pieces: tuple[Piece, ...]
    iterate: int
    map_id: str = ""
    message: str = ""


@dataclass(frozen=True)
class HorseshoeReport:
    ok: bool
    kind: str = ""
    reason: str = ""
    witness: Optional[CompactInterval] = None
    images: tuple[Piece, ...] = ()


@dataclass(frozen=True)
class SwapStructure:
    """The two sides of the unique fixed point exchange under one step.

    K and L are the window-clipped sides; the certified inclusions are
    f(K) within [c, +inf) and f(L) within (-inf, c].
    """

    c: Fraction
    K: CompactInterval
    L: CompactInterval


@dataclass(frozen=True)
class BitransitiveEvidence:
    """A short interval on one side whose image crosses the fixed point."""

    witness: CompactInterval
    image: CompactInterval
    side: str


@dataclass(frozen=True)
class Unknown:
    reason: str
    n_tried: int


DichotomyResult = Union[SwapStructure, BitransitiveEvidence]
FindResult = Union[QuasiHorseshoe, TightReport]


def quasihorseshoe(
    base: CompactInterval,
    pieces,
    iterate: int,
    map_id: str = "",
    kind: str = "",
) -> QuasiHorseshoe:
    """Build a certificate, normalizing each piece to merged components."""
    norm = []
    for p in pieces:
        if isinstance(p, CompactInterval):
            p = (p,)
        norm.append(merge_components(list(p)))
    return QuasiHorseshoe(base, tuple(norm), iterate, map_id, kind)


def _first_gap(
    covered: tuple[CompactInterval, ...], base: CompactInterval
) -> CompactInterval:
    """A point of base missed by the (merged, sorted) covered components."""
    cur = base.lo
    for comp in covered:
        if comp.lo > cur:
            break
        cur = max(cur, comp.hi)
        if cur >= base.hi:
            break
    else:
        comp = None
    if comp is not None and comp.lo > cur:
        pt = (cur + min(comp.lo, base.hi)) / 2
    else:
        pt = (cur + base.hi) / 2
    return CompactInterval(pt, pt)


def verify(h: QuasiHorseshoe, m) -> HorseshoeReport:
    """Exact check of the certificate; never raises on a mere failure."""
    m = as_exact_map(m)

    def fail(reason, witness=None, images=()):
        return HorseshoeReport(False, "", reason, witness, tuple(images))

    if len(h.pieces) < 2:
        return fail(f"fewer than two pieces ({len(h.pieces)})")
    if h.base.is_point():
        return fail(f"base {h.base} is degenerate")
    pieces = tuple(merge_components(list(p)) for p in h.pieces)
    for idx, p in enumerate(pieces):
        if not p:
            return fail(f"piece {idx + 1} is empty")
        for comp in p:
            if not h.base.contains_interval(comp):
                return fail(
                    f"piece {idx + 1} component {comp} leaves base {h.base}",
                    comp,
                )
    for i in range(len(pieces)):
        for j in range(i + 1, len(pieces)):
            for ci in pieces[i]:
                for cj in pieces[j]:
                    if ci.interior_intersects(cj):
                        overlap = ci.intersect(cj)
                        return fail(
                            f"interiors of pieces {i + 1} and {j + 1} "
                            f"overlap at {overlap}",
                            overlap,
                        )
    images: list[Piece] = []
    for idx, p in enumerate(pieces):
        try:
            imgs = merge_components([m.image(comp, h.iterate) for comp in p])
        except (DomainExceeded, AccumulationPoint) as exc:
            return fail(f"piece {idx + 1} image not computable: {exc}")
        images.append(imgs)
        if not union_covers(list(imgs), h.base):
            return HorseshoeReport(
                False,
                "",
                f"piece {idx + 1} image does not cover the base",
                _first_gap(imgs, h.base),
                tuple(images),
            )
    union = merge_components([c for p in pieces for c in p])
    if union != (h.base,):
        kind = "loose"
    elif all(imgs == (h.base,) for imgs in images):
        kind = "tight"
    else:
        kind = "neither"
    return HorseshoeReport(True, kind, "", None, tuple(images))


def _assert_verified(h: QuasiHorseshoe, m: ExactMap) -> HorseshoeReport:
    rep = verify(h, m)
    if not rep.ok:
        raise InvariantViolated(
            f"internally constructed certificate failed verification: "
            f"{rep.reason}"
        )
    return rep


def _lap_pullback(
    g: PLMap, lap: CompactInterval, base: CompactInterval
) -> Optional[CompactInterval]:
    """Tightest subinterval of a monotone lap mapping exactly onto base."""
    va, vb = g(lap.lo), g(lap.hi)
    if min(va, vb) > base.lo or max(va, vb) < base.hi:
        return None
    if va <= vb:
        lo = g.solve_eq(base.lo, within=lap)[0].hi
        hi = g.solve_eq(base.hi, within=lap)[0].lo
    else:
        lo = g.solve_eq(base.hi, within=lap)[0].hi
        hi = g.solve_eq(base.lo, within=lap)[0].lo
    return CompactInterval(lo, hi)


def loosen(h: QuasiHorseshoe, m) -> FindResult:
    """Shrink each piece to the tightest single-lap pullback of the base.

    Keeps a piece unchanged when no single monotone lap over it covers the
    base.  Returns a loose certificate, or a TightReport when the shrunk
    pieces still tile the base exactly.
    """
    m = as_exact_map(m)
    rep = verify(h, m)
    if not rep.ok:
        raise UncertifiedInput(
            f"loosen requires a verified certificate: {rep.reason}"
        )
    new_pieces: list[Piece] = []
    for p in h.pieces:
        comps = merge_components(list(p))
        pullback = None
        for comp in comps:
            if comp.is_point():
                continue
            g = m.materialize(comp, h.iterate)
            for lap in monotone_laps(g):
                pullback = _lap_pullback(g, lap, h.base)
                if pullback is not None:
                    break
            if pullback is not None:
                break
        new_pieces.append((pullback,) if pullback is not None else comps)
    cand = QuasiHorseshoe(h.base, tuple(new_pieces), h.iterate, h.map_id)
    rep2 = verify(cand, m)
    if not rep2.ok:
        raise InvariantViolated(
            f"loosened certificate failed re-verification: {rep2.reason}"
        )
    if rep2.kind == "tight":
        return TightReport(
            cand.base,
            cand.pieces,
            cand.iterate,
            cand.map_id,
            message="every piece maps exactly onto the base and the pieces "
            "tile it; only loose certificates exist for maps transitive on "
            "a non-compact interval",
        )
    if rep2.kind == "loose":
        return replace(cand, kind="loose")
    raise ConstructionFailed(
        "loosen",
        "no piece admits a single covering monotone lap; union of pieces "
        "still equals the base",
    )


def _refine_violation(m: ExactMap, start: CompactInterval, violates, prefer_hi: bool):
    """Shrink a violating interval by bisection, keeping the violating half
    nearer the fixed point, until its length is at most 1."""
    cur = start
    img = m.image(cur, 1)
    while cur.length() > 1:
        mid = (cur.lo + cur.hi) / 2
        halves = [
            CompactInterval(mid, cur.hi),
            CompactInterval(cur.lo, mid),
        ]
        if not prefer_hi:
            halves.reverse()
        for half in halves:
            himg = m.image(half, 1)
            if violates(himg):
                cur, img = half, himg
                break
        else:
            break
    return cur, img


def dichotomy(m) -> DichotomyResult:
    """Around a unique fixed point c: either the two sides swap under one
    step (window-certified), or a witness interval crosses back."""
    m = as_exact_map(m)
    w = m.census_window()
    try:
        fixed = m.fixed_points(w)
    except AccumulationPoint as exc:
        raise NotApplicable(
            f"fixed-point census is not finite on {w}: {exc}"
        ) from exc
    if len(fixed) != 1 or not fixed[0].is_point():
        raise NotApplicable(
            f"need exactly one fixed point in {w}, census has "
            f"{len(fixed)} component(s)"
        )
    c = fixed[0].lo
    if not (w.lo < c < w.hi):
        raise NotApplicable(f"fixed point {c} sits on the window edge of {w}")
    K = CompactInterval(w.lo, c)
    L = CompactInterval(c, w.hi)
    img_K = m.image(K, 1)
    img_L = m.image(L, 1)
    if img_K.lo >= c and img_L.hi <= c:
        return SwapStructure(c, K, L)
    if img_K.lo < c:
        witness, img = _refine_violation(
            m, K, lambda iv: iv.lo < c, prefer_hi=True
        )
        side = "left"
    else:
        witness, img = _refine_violation(
            m, L, lambda iv: iv.hi > c, prefer_hi=False
        )
        side = "right"
    return BitransitiveEvidence(witness, img, side)


def _leftmost_attaining(g: PLMap, value: Fraction) -> Fraction:
    xs = [x for x, y in g.nodes if y == value]
    if not xs:
        raise InvariantViolated(f"extreme value {value} not attained at a node")
    return xs[0]


def _two_fixed_chain(
    m: ExactMap, w: CompactInterval, a: Fraction, b: Fraction, up: bool
) -> QuasiHorseshoe:
    if up:
        returns = [c for c in m.solve(a, CompactInterval(b, w.hi)) if c.lo > b]
        if not returns:
            raise ConstructionFailed(
                "c = min{x > b : f(x) = a}",
                f"f never returns to {a} right of {b} inside {w}",
            )
        c = returns[0].lo
        base = CompactInterval(a, c)
        g = m.materialize(base, 1)
        z = g.range_on().hi
        if z < c:
            raise ConstructionFailed(
                "max f on [a,c] >= c",
                f"maximum {z} stays below the return point {c}",
            )
        d = _leftmost_attaining(g, z)
        if not (a < d < c):
            raise ConstructionFailed(
                "a < d < c", f"extreme witness {d} not interior to {base}"
            )
        pieces = (CompactInterval(a, d), CompactInterval(d, c))
    else:
        returns = [c for c in m.solve(b, CompactInterval(w.lo, a)) if c.hi < a]
        if not returns:
            raise ConstructionFailed(
                "c = max{x < a : f(x) = b}",
                f"f never returns to {b} left of {a} inside {w}",
            )
        c = returns[-1].hi
        base = CompactInterval(c, b)
        g = m.materialize(base, 1)
        z = g.range_on().lo
        if z > c:
            raise ConstructionFailed(
                "min f on [c,b] <= c",
                f"minimum {z} stays above the return point {c}",
            )
        d = _leftmost_attaining(g, z)
        if not (c < d < b):
            raise ConstructionFailed(
                "c < d < b", f"extreme witness {d} not interior to {base}"
            )
        pieces = (CompactInterval(c, d), CompactInterval(d, b))
    return quasihorseshoe(base, pieces, 1, m.map_id)


def find_two_fixed(m) -> FindResult:
    """Loose 2-horseshoe at iterate 1 from two adjacent fixed points."""
    m = as_exact_map(m)
    saw_two = False
    tight: Optional[TightReport] = None
    last_fail: Optional[ConstructionFailed] = None
    for w in m.window_schedule():
        try:
            fixed = m.fixed_points(w)
        except AccumulationPoint as exc:
            last_fail = ConstructionFailed("fixed-point census", str(exc))
            continue
        if len(fixed) < 2:
            continue
        saw_two = True
        for left, right in zip(fixed, fixed[1:]):
            a, b = left.hi, right.lo
            mid = (a + b) / 2
            try:
                raw = _two_fixed_chain(m, w, a, b, up=m(mid) > mid)
            except ConstructionFailed as exc:
                last_fail = exc
                continue
            except DomainExceeded as exc:
                last_fail = ConstructionFailed("window image", str(exc))
                continue
            _assert_verified(raw, m)
            out = loosen(raw, m)
            if isinstance(out, TightReport):
                tight = tight or out
                continue
            return out
    if tight is not None:
        return tight
    if not saw_two:
        raise NotApplicable(
            "fewer than two fixed points in every search window"
        )
    raise last_fail or ConstructionFailed(
        "find_two_fixed", "no adjacent fixed pair yields a certificate"
    )


def _aug_fixed(
    m: ExactMap, fixed: tuple[CompactInterval, ...]
) -> tuple[CompactInterval, ...]:
    """Census plus the origin when the map fixes 0 (it may sit outside the
    search window)."""
    dom = m.domain
    zero = Fraction(0)
    if dom is not None and zero not in dom:
        return fixed
    try:
        fixes_zero = m(zero) == 0
    except (DomainExceeded, OutOfDomain):
        fixes_zero = False
    if not fixes_zero:
        return fixed
    return merge_components(list(fixed) + [CompactInterval(zero, zero)])


def _halfline_chain(m: ExactMap, w: CompactInterval) -> QuasiHorseshoe:
    fixed = m.fixed_points(w)
    zero = Fraction(0)
    z1 = None
    for comp in fixed:
        if comp.hi > 0:
            z1 = comp.lo if comp.lo > 0 else comp.hi
            break
    if z1 is None:
        raise ConstructionFailed(
            "z1 = least positive fixed point", f"no positive fixed point in {w}"
        )
    a = m.image(CompactInterval(zero, z1), 1).hi
    if a <= z1:
        raise ConstructionFailed(
            "a>z1",
            f"max f([0, {z1}]) = {a} <= {z1}: [0, {z1}] is invariant",
        )
    b = m.image(CompactInterval(zero, a), 1).hi
    p = m.solve(b, CompactInterval(zero, a))[0].lo
    if b <= p:
        raise ConstructionFailed(
            "f(p) > p", f"the maximum {b} of f on [0, {a}] sits below its "
            f"leftmost witness {p}"
        )
    aug = _aug_fixed(m, fixed)
    below_p = [comp for comp in aug if comp.hi <= p]
    above_p = [comp for comp in aug if comp.lo >= p]
    if not below_p:
        raise ConstructionFailed(
            "u = greatest fixed point <= p", f"none at or below {p}"
        )
    if not above_p:
        raise ConstructionFailed(
            "v = least fixed point >= p", f"none at or above {p} in {w}"
        )
    u = below_p[-1].hi
    v = above_p[0].lo
    qs = m.solve(u, CompactInterval(v, w.hi))
    if not qs:
        raise ConstructionFailed(
            "q = min{x >= v : f(x) = u}",
            f"f never returns to {u} at or beyond {v} inside {w}",
        )
    q = qs[0].lo
    below_q = [comp for comp in aug if comp.hi <= q]
    above_q = [comp for comp in aug if comp.lo >= q]
    w2 = below_q[-1].hi
    if not above_q:
        raise ConstructionFailed(
            "y = least fixed point >= q", f"none at or above {q} in {w}"
        )
    y = above_q[0].lo
    d = m.image(CompactInterval(zero, y), 1).hi
    if d < y:
        raise ConstructionFailed(
            "max f([0,y]) >= y", f"maximum {d} stays below {y}"
        )
    rs = m.solve(d, CompactInterval(u, w2))
    if not rs:
        raise ConstructionFailed(
            "r in [u,w]", f"the maximum {d} has no witness in [{u}, {w2}]"
        )
    r = rs[0].lo
    if not (u < r < q < y):
        raise ConstructionFailed(
            "u < r < q < y", f"chain points {u}, {r}, {q}, {y} out of order"
        )
    base = CompactInterval(u, y)
    pieces = (
        CompactInterval(u, r),
        CompactInterval(r, q),
        CompactInterval(q, y),
    )
    return quasihorseshoe(base, pieces, 1, m.map_id)


def find_halfline(m) -> FindResult:
    """Loose 3-horseshoe at iterate 1 for a map of [0, inf) to itself."""
    m = as_exact_map(m)
    tight: Optional[TightReport] = None
    last_fail: Optional[ConstructionFailed] = None
    for w in m.window_schedule():
        try:
            raw = _halfline_chain(m, w)
        except ConstructionFailed as exc:
            last_fail = exc
            continue
        except (DomainExceeded, AccumulationPoint) as exc:
            last_fail = ConstructionFailed("window image", str(exc))
            continue
        _assert_verified(raw, m)
        out = loosen(raw, m)
        if isinstance(out, TightReport):
            tight = tight or out
            continue
        return out
    if tight is not None:
        return tight
    raise last_fail or ConstructionFailed(
        "find_halfline", "chain failed in every window"
    )


def _case_two_left(
    m: ExactMap, z: Fraction, w: CompactInterval, a: Fraction
) -> QuasiHorseshoe:
    """Point chain when the return point a sits below the fixed point z."""
    bs = [c for c in m.solve(a, CompactInterval(z, w.hi)) if c.lo > z]
    if not bs:
        raise ConstructionFailed(
            "b = min{x > z : f(x) = a}",
            f"f never returns to {a} right of {z} inside {w}",
        )
    b = bs[0].lo
    c = m.image(CompactInterval(a, z), 1).hi
    if c <= z:
        raise ConstructionFailed("c > z", f"max f([a,z]) = {c} <= z = {z}")
    p = m.solve(c, CompactInterval(a, z))[0].lo
    d = m.image(CompactInterval(a, c), 1).lo
    if d > a:
        raise ConstructionFailed("d <= a", f"min f([a,c]) = {d} > a = {a}")
    qs = m.solve(d, CompactInterval(b, c))
    if not qs:
        raise ConstructionFailed(
            "q in [b,c]", f"the minimum {d} has no witness in [{b}, {c}]"
        )
    e = m.image(CompactInterval(d, c), 1).hi
    rs = m.solve(e, CompactInterval(d, a))
    if not rs:
        raise ConstructionFailed(
            "r in [d,a]", f"the maximum {e} has no witness in [{d}, {a}]"
        )
    r = rs[0].lo
    ss = [comp for comp in m.solve(p, CompactInterval(z, b)) if comp.lo > z]
    if not ss:
        raise ConstructionFailed(
            "s in (z,b]", f"no solution of f = {p} in ({z}, {b}]"
        )
    s_pt = ss[0].lo
    if s_pt >= b:
        raise ConstructionFailed(
            "s < b", f"witness {s_pt} does not precede b = {b}"
        )
    ts = [comp for comp in m.solve(r, CompactInterval(b, c)) if comp.lo > b]
    if not ts:
        raise ConstructionFailed(
            "t in (b,c]", f"no solution of f = {r} in ({b}, {c}]"
        )
    t = ts[0].lo
    base = CompactInterval(z, t)
    pieces = (
        CompactInterval(z, s_pt),
        CompactInterval(s_pt, b),
        CompactInterval(b, t),
    )
    return quasihorseshoe(base, pieces, 2, m.map_id)


def _mirror_interval(iv: CompactInterval) -> CompactInterval:
    return CompactInterval(-iv.hi, -iv.lo)


def _mirror_cert(h: QuasiHorseshoe, map_id: str) -> QuasiHorseshoe:
    pieces = tuple(
        tuple(_mirror_interval(c) for c in reversed(p))
        for p in reversed(h.pieces)
    )
    return QuasiHorseshoe(
        _mirror_interval(h.base), pieces, h.iterate, map_id, h.kind
    )


def _case_two_chain(
    m: ExactMap, z: Fraction, w: CompactInterval
) -> QuasiHorseshoe:
    sols = m.solve(z, w)
    below = [comp.hi for comp in sols if comp.hi < z]
    above = [comp.lo for comp in sols if comp.lo > z]
    if below:
        return _case_two_left(m, z, w, max(below))
    if not above:
        raise ConstructionFailed(
            "a != z with f(a) = z",
            f"f returns to its fixed point nowhere else in {w}",
        )
    reflected = as_exact_map(
        m.materialize(w, 1).reflect(), map_id=m.map_id
    )
    raw = _case_two_left(
        reflected,
        -z,
        CompactInterval(-w.hi, -w.lo),
        -min(above),
    )
    return _mirror_cert(raw, m.map_id)


def _shift_plmap(g: PLMap, offset: Fraction) -> PLMap:
    return PLMap(tuple((x + offset, y + offset) for x, y in g.nodes))


def _unshift_pieces(pieces: tuple[Piece, ...], z: Fraction):
    return tuple(
        tuple(CompactInterval(c.lo + z, c.hi + z) for c in p) for p in pieces
    )


def _case_one(m: ExactMap, z: Fraction, w: CompactInterval) -> FindResult:
    """Swap structure present: find a half-line certificate for f^2 on
    [z, w.hi] and restate it at iterate 2."""
    if isinstance(m.obj, DyadicMirrorTiled) and z == 0:
        try:
            sub_obj = HalfLineTiled(m.obj)
        except InvariantViolated as exc:
            raise ConstructionFailed(
                "second-iterate half-line map", str(exc)
            ) from exc
        sub = as_exact_map(sub_obj, map_id=m.map_id)
        found = find_halfline(sub)
        shift = Fraction(0)
    else:
        g2 = _shift_plmap(m.materialize(CompactInterval(z, w.hi), 2), -z)
        sub = as_exact_map(g2, map_id=m.map_id)
        found = find_halfline(sub)
        shift = z
    if isinstance(found, TightReport):
        return TightReport(
            CompactInterval(found.base.lo + shift, found.base.hi + shift),
            _unshift_pieces(found.pieces, shift),
            2 * found.iterate,
            m.map_id,
            found.message,
        )
    out = QuasiHorseshoe(
        CompactInterval(found.base.lo + shift, found.base.hi + shift),
        _unshift_pieces(found.pieces, shift),
        2 * found.iterate,
        m.map_id,
    )
    rep = verify(out, m)
    if not rep.ok:
        raise InvariantViolated(
            f"delegated certificate failed re-verification: {rep.reason}"
        )
    return replace(out, kind=rep.kind)


def find_unique_fixed(m) -> FindResult:
    """Loose 3-horseshoe at iterate 2 for a map with one fixed point."""
    m = as_exact_map(m)
    w_census = m.census_window()
    try:
        fixed = m.fixed_points(w_census)
    except AccumulationPoint as exc:
        raise NotApplicable(
            f"fixed-point census is not finite on {w_census}: {exc}"
        ) from exc
    if len(fixed) != 1 or not fixed[0].is_point():
        raise NotApplicable(
            f"need exactly one fixed point in {w_census}, census has "
            f"{len(fixed)} component(s)"
        )
    z = fixed[0].lo
    tight: Optional[TightReport] = None
    last_fail: Optional[ConstructionFailed] = None
    tried_tiled_delegation = False
    for w in m.window_schedule():
        if not (w.lo < z < w.hi):
            continue
        img_left = m.image(CompactInterval(w.lo, z), 1)
        img_right = m.image(CompactInterval(z, w.hi), 1)
        if img_left.lo >= z and img_right.hi <= z:
            tiled = isinstance(m.obj, DyadicMirrorTiled) and z == 0
            if tiled and tried_tiled_delegation:
                continue
            try:
                out = _case_one(m, z, w)
            except (ConstructionFailed, NotApplicable) as exc:
                step = exc.step if isinstance(exc, ConstructionFailed) else ""
                last_fail = ConstructionFailed(
                    f"half-line delegation: {step}" if step else
                    "half-line delegation",
                    str(exc),
                )
                tried_tiled_delegation = tried_tiled_delegation or tiled
                continue
            except DomainExceeded as exc:
                last_fail = ConstructionFailed("window image", str(exc))
                continue
            if isinstance(out, TightReport):
                tight = tight or out
                continue
            return out
        try:
            raw = _case_two_chain(m, z, w)
        except ConstructionFailed as exc:
            last_fail = exc
            continue
        except DomainExceeded as exc:
            last_fail = ConstructionFailed("window image", str(exc))
            continue
        _assert_verified(raw, m)
        out = loosen(raw, m)
        if isinstance(out, TightReport):
            tight = tight or out
            continue
        return out
    if tight is not None:
        return tight
    raise last_fail or ConstructionFailed(
        "find_unique_fixed", "chain failed in every window"
    )


def amplify(h: QuasiHorseshoe, m, n_max: int) -> Union[QuasiHorseshoe, Unknown]:
    """Search for an (s^n + 1)-branch certificate of f^(n*iterate), n <= n_max.

    A returned certificate raises the entropy lower bound from
    log(s)/iterate to log(s^n + 1)/(n*iterate).
    """
    m = as_exact_map(m)
    rep = verify(h, m)
    if not rep.ok:
        raise UncertifiedInput(
            f"amplify requires a verified certificate: {rep.reason}"
        )
    if rep.kind != "loose":
        raise NotLoose(
            f"amplify requires a loose certificate, got kind={rep.kind!r}"
        )
    s = len(h.pieces)
    if n_max < 2:
        return Unknown("n_max below 2 leaves nothing to try", 0)
    last = "no amplified certificate found"
    for n in range(2, n_max + 1):
        iterate = n * h.iterate
        target = s**n + 1
        try:
            g = m.materialize(h.base, iterate)
        except (DomainExceeded, PieceExplosion, AccumulationPoint) as exc:
            return Unknown(
                f"f^{iterate} is not materializable on the base: {exc}", n
            )
        pulls: list[CompactInterval] = []
        for lap in monotone_laps(g):
            pb = _lap_pullback(g, lap, h.base)
            if pb is not None:
                pulls.append(pb)
                if len(pulls) == target:
                    break
        if len(pulls) < target:
            last = (
                f"only {len(pulls)} covering branches at n={n}, "
                f"need {target}"
            )
            continue
        cand = quasihorseshoe(
            h.base, tuple((iv,) for iv in pulls), iterate, h.map_id
        )
        rep2 = verify(cand, m)
        if rep2.ok:
            return replace(cand, kind=rep2.kind)
        last = f"candidate at n={n} failed verification: {rep2.reason}"
    return Unknown(last, n_max)
