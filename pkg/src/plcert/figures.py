"""Deterministic SVG 1.1 rendering of exact piecewise-linear graphs.

Breakpoints stay exact rationals until the final coordinate formatting
(fixed 6-decimal output), so two renders of the same input are byte
identical.  Maps with infinitely many pieces near an accumulation point are
clipped at a tile cutoff and the clipped point is marked explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import OutOfDomain
from .exact import CompactInterval, pow2
from .linemap import (
    DyadicCompactification,
    DyadicMirrorTiled,
    HalfLineTiled,
    MirrorTranslationTiled,
)
from .maps import ExactMap, as_exact_map
from .plmap import PLMap

WIDTH = 640
HEIGHT = 480
MARGIN = 48
TILE_CUTOFF = 12


@dataclass(frozen=True)
class PlotData:
    """Exact polylines and decorations behind one figure."""

    segments: tuple[PLMap, ...]
    markers: tuple[Fraction, ...]
    window: CompactInterval
    iterate: int
    map_id: str


def _drawable_segments(
    em: ExactMap, window: CompactInterval, iterate: int, cutoff: int
) -> tuple[list[CompactInterval], list[Fraction]]:
    obj = em.obj
    cut = pow2(-cutoff - 1)
    segs: list[CompactInterval] = []
    markers: list[Fraction] = []
    if isinstance(obj, PLMap):
        if not obj.domain.intersects(window):
            raise OutOfDomain(f"window {window} misses domain {obj.domain}")
        segs.append(obj.domain.intersect(window))
    elif isinstance(obj, MirrorTranslationTiled):
        segs.append(window)
    elif isinstance(obj, DyadicMirrorTiled):
        lo, hi = window.lo, window.hi
        if lo < -cut:
            segs.append(CompactInterval(lo, min(hi, -cut)))
            if hi >= 0:
                markers.append(Fraction(0))
        if hi > 0:
            pos_lo = max(lo, cut if iterate > 1 else Fraction(0))
            if pos_lo < hi:
                segs.append(CompactInterval(pos_lo, hi))
            if iterate > 1 and lo <= cut and Fraction(0) not in markers:
                markers.append(Fraction(0))
    elif isinstance(obj, HalfLineTiled):
        if window.hi <= 0:
            raise OutOfDomain(f"window {window} leaves the half line")
        lo = max(window.lo, Fraction(0))
        if lo == 0:
            lo = cut
            markers.append(Fraction(0))
        if lo < window.hi:
            segs.append(CompactInterval(lo, window.hi))
    elif isinstance(obj, DyadicCompactification):
        lo = max(window.lo, Fraction(0))
        hi = min(window.hi, Fraction(1))
        if lo == 0:
            lo = cut
            markers.append(Fraction(0))
        if hi == 1:
            hi = 1 - cut
            markers.append(Fraction(1))
        if lo < hi:
            segs.append(CompactInterval(lo, hi))
    else:
        segs.append(window)
    if not segs:
        raise OutOfDomain(f"window {window} leaves nothing drawable")
    return segs, markers


def plot_data(
    m: Union[ExactMap, PLMap, object],
    window: CompactInterval,
    iterate: int = 1,
    tile_cutoff: int = TILE_CUTOFF,
) -> PlotData:
    """Exact materialization of the figure: one PLMap per drawable segment."""
    em = as_exact_map(m)
    segs, markers = _drawable_segments(em, window, iterate, tile_cutoff)
    mats = tuple(em.materialize(seg, iterate) for seg in segs)
    return PlotData(
        segments=mats,
        markers=tuple(markers),
        window=window,
        iterate=iterate,
        map_id=em.map_id,
    )


def _fmt(v: float) -> str:
    out = f"{v:.6f}"
    return "0.000000" if out == "-0.000000" else out


class _Frame:
    def __init__(self, window: CompactInterval, ys: Sequence[Fraction]) -> None:
        x_lo, x_hi = float(window.lo), float(window.hi)
        y_lo = float(min(min(ys), window.lo))
        y_hi = float(max(max(ys), window.hi))
        x_pad = (x_hi - x_lo) * 0.05 or 1.0
        y_pad = (y_hi - y_lo) * 0.05 or 1.0
        self.x_lo, self.x_hi = x_lo - x_pad, x_hi + x_pad
        self.y_lo, self.y_hi = y_lo - y_pad, y_hi + y_pad

    def sx(self, x: float) -> float:
        t = (x - self.x_lo) / (self.x_hi - self.x_lo)
        return MARGIN + t * (WIDTH - 2 * MARGIN)

    def sy(self, y: float) -> float:
        t = (y - self.y_lo) / (self.y_hi - self.y_lo)
        return HEIGHT - MARGIN - t * (HEIGHT - 2 * MARGIN)


def render_plot(
    m: Union[ExactMap, PLMap, object],
    window: CompactInterval,
    iterate: int = 1,
    out_path: Optional[str] = None,
    tile_cutoff: int = TILE_CUTOFF,
) -> str:
    """SVG document for the graph of f^iterate on the window."""
    data = plot_data(m, window, iterate, tile_cutoff)
    ys = [y for g in data.segments for _, y in g.nodes]
    frame = _Frame(window, ys)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
    ]
    # axes through the origin when visible
    if frame.x_lo < 0 < frame.x_hi:
        x0 = _fmt(frame.sx(0.0))
        parts.append(
            f'<line x1="{x0}" y1="{MARGIN}" x2="{x0}" y2="{HEIGHT - MARGIN}" '
            f'stroke="#999999" stroke-width="1"/>'
        )
    if frame.y_lo < 0 < frame.y_hi:
        y0 = _fmt(frame.sy(0.0))
        parts.append(
            f'<line x1="{MARGIN}" y1="{y0}" x2="{WIDTH - MARGIN}" y2="{y0}" '
            f'stroke="#999999" stroke-width="1"/>'
        )
    # diagonal y = x across the window
    parts.append(
        '<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#bbbbbb" '
        'stroke-width="1" stroke-dasharray="4 3"/>'.format(
            _fmt(frame.sx(float(window.lo))),
            _fmt(frame.sy(float(window.lo))),
            _fmt(frame.sx(float(window.hi))),
            _fmt(frame.sy(float(window.hi))),
        )
    )
    for g in data.segments:
        pts = " ".join(
            f"{_fmt(frame.sx(float(x)))},{_fmt(frame.sy(float(y)))}"
            for x, y in g.nodes
        )
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="#1f5fbf" '
            f'stroke-width="1.5"/>'
        )
    for g in data.segments:
        for comp in g.fixed_points():
            mid = (comp.lo + comp.hi) / 2
            parts.append(
                '<circle cx="{}" cy="{}" r="3" fill="#c03030"/>'.format(
                    _fmt(frame.sx(float(mid))), _fmt(frame.sy(float(mid)))
                )
            )
    for mk in data.markers:
        mx = _fmt(frame.sx(float(mk)))
        parts.append(
            f'<line x1="{mx}" y1="{MARGIN}" x2="{mx}" y2="{HEIGHT - MARGIN}" '
            f'stroke="#d08020" stroke-width="1" stroke-dasharray="2 3"/>'
        )
        parts.append(
            f'<circle cx="{mx}" cy="{_fmt(frame.sy(float(mk)))}" r="4" '
            f'fill="none" stroke="#d08020" stroke-width="1.5"/>'
        )
    label = data.map_id or "plmap"
    title = (
        f"{label}  iterate {data.iterate}  window "
        f"[{float(window.lo):g}, {float(window.hi):g}]"
    )
    parts.append(
        f'<text x="{MARGIN}" y="{MARGIN - 16}" font-family="monospace" '
        f'font-size="13" fill="#333333">{title}</text>'
    )
    parts.append("</svg>")
    doc = "\n".join(parts) + "\n"
    if out_path is not None:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(doc)
    return doc
