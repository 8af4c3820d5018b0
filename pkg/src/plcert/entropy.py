"""Entropy certification: covering matrices, certified Perron roots, and
Canovas-Rodriguez style entropy sandwiches.

Lower bounds come from verified horseshoe certificates (an s-horseshoe for
f^n witnesses entropy at least log(s)/n); upper bounds come from Lipschitz
constants.  All orderings between log-bounds are decided exactly by
cross-exponentiation, never by floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import (
    InvariantViolated,
    PieceExplosion,
    SelfMapRequired,
    ToleranceNotReached,
    UncertifiedInput,
)
from .exact import (
    CompactInterval,
    RationalLike,
    as_fraction,
    format_fraction,
    merge_components,
    union_covers,
)
from .horseshoe import Piece, QuasiHorseshoe, verify
from .maps import ExactMap, as_exact_map
from .plmap import PLMap, compose

LAP_NODE_CAP = 10 ** 6
PERRON_ROUND_CAP = 10_000
ENCLOSURE_PREC = 120

MapLike = Union[ExactMap, PLMap, object]


# ---------------------------------------------------------------------------
# symbolic log-bounds


@dataclass(frozen=True)
class LogValue:
    """The number log(arg)/divisor with arg >= 1 rational and divisor >= 1.

    Equality is structural (log(9)/2 and log(3) are distinct objects); the
    ordering operators compare true values exactly by cross-exponentiation.
    """

    arg: Fraction
    divisor: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "arg", as_fraction(self.arg))
        if self.arg < 1:
            raise InvariantViolated(f"log argument {self.arg} below 1")
        if self.divisor < 1:
            raise InvariantViolated(f"log divisor {self.divisor} below 1")

    def witness(self, other: "LogValue") -> tuple[Fraction, Fraction]:
        """Rationals (p, q) with self <=> other exactly as p <=> q."""
        g = math.gcd(self.divisor, other.divisor)
        return self.arg ** (other.divisor // g), other.arg ** (self.divisor // g)

    def __lt__(self, other: "LogValue") -> bool:
        p, q = self.witness(other)
        return p < q

    def __le__(self, other: "LogValue") -> bool:
        p, q = self.witness(other)
        return p <= q

    def __gt__(self, other: "LogValue") -> bool:
        return other < self

    def __ge__(self, other: "LogValue") -> bool:
        return other <= self

    @property
    def symbolic(self) -> str:
        if self.arg == 1:
            return "0"
        body = f"log({format_fraction(self.arg)})"
        return body if self.divisor == 1 else f"{body}/{self.divisor}"

    def float_enclosure(self) -> tuple[float, float]:
        """Outward-rounded floats [lo, hi] containing log(arg)/divisor."""
        from mpmath import iv, mpf

        if self.arg == 1:
            return (0.0, 0.0)
        old = iv.prec
        iv.prec = ENCLOSURE_PREC
        try:
            val = iv.log(iv.mpf(self.arg.numerator) / iv.mpf(self.arg.denominator))
            val = val / self.divisor
            lo_m, hi_m = mpf(val.a), mpf(val.b)
        finally:
            iv.prec = old
        lo, hi = float(lo_m), float(hi_m)
        if mpf(lo) > lo_m:
            lo = math.nextafter(lo, -math.inf)
        if mpf(hi) < hi_m:
            hi = math.nextafter(hi, math.inf)
        return lo, hi


def compare_log_values(a: LogValue, b: LogValue) -> tuple[str, str]:
    """Exact relation of a versus b: ("<" | "=" | ">", integer witness)."""
    p, q = a.witness(b)
    left = p.numerator * q.denominator
    right = q.numerator * p.denominator
    rel = "<" if left < right else ("=" if left == right else ">")
    return rel, f"{left} {rel} {right}"


# ---------------------------------------------------------------------------
# covering matrices


@dataclass(frozen=True)
class CoveringMatrix:
    """Exact 0/1 matrix with entry (i, j) = 1 iff f^iterate(piece_i) covers
    piece_j."""

    pieces: tuple[Piece, ...]
    entries: tuple[tuple[int, ...], ...]
    iterate: int = 1

    @property
    def size(self) -> int:
        return len(self.entries)


def _as_piece(p: object) -> Piece:
    if isinstance(p, CompactInterval):
        return (p,)
    return merge_components(list(p))  # type: ignore[arg-type]


def covering_matrix(m: MapLike, pieces: Sequence[object], iterate: int = 1) -> CoveringMatrix:
    """Exact full-cover relation matrix of the pieces under f^iterate."""
    em = as_exact_map(m)
    norm = tuple(_as_piece(p) for p in pieces)
    if not norm:
        raise InvariantViolated("covering matrix needs at least one piece")
    images = []
    for piece in norm:
        images.append(tuple(em.image(c, iterate) for c in piece))
    rows = []
    for img in images:
        row = tuple(
            1 if all(union_covers(img, d) for d in target) else 0 for target in norm
        )
        rows.append(row)
    return CoveringMatrix(pieces=norm, entries=tuple(rows), iterate=iterate)


# ---------------------------------------------------------------------------
# certified spectral radius


def _reachable(entries: Sequence[Sequence[int]], start: int, *, reverse: bool) -> set[int]:
    n = len(entries)
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for v in range(n):
            hit = entries[v][u] if reverse else entries[u][v]
            if hit and v not in seen:
                seen.add(v)
                stack.append(v)
    return seen

def _strong_components(entries: Sequence[Sequence[int]]) -> list[list[int]]:
    n = len(entries)
    assigned = [False] * n
    comps: list[list[int]] = []
    for i in range(n):
        if assigned[i]:
            continue
        comp = sorted(_reachable(entries, i, reverse=False) & _reachable(entries, i, reverse=True))
        for j in comp:
            assigned[j] = True
        comps.append(comp)
    return comps


def _component_perron(entries: Sequence[Sequence[int]], comp: Sequence[int], tol: Fraction) -> CompactInterval:
    """Certified enclosure of the spectral radius of an irreducible class.

    Power iteration on B = A + I (primitive when A is irreducible) with
    Collatz-Wielandt ratio bounds: for any positive v,
    min_i (Bv)_i / v_i <= rho(B) <= max_i (Bv)_i / v_i.
    """
    n = len(comp)
    b = [
        [Fraction(entries[comp[i]][comp[j]] + (1 if i == j else 0)) for j in range(n)]
        for i in range(n)
    ]
    v = [Fraction(1)] * n
    lo: Optional[Fraction] = None
    hi: Optional[Fraction] = None
    for _ in range(PERRON_ROUND_CAP):
        w = [sum(b[i][j] * v[j] for j in range(n)) for i in range(n)]
        ratios = [w[i] / v[i] for i in range(n)]
        step_lo, step_hi = min(ratios), max(ratios)
        lo = step_lo if lo is None else max(lo, step_lo)
        hi = step_hi if hi is None else min(hi, step_hi)
        if hi - lo <= tol:
            return CompactInterval(lo - 1, hi - 1)
        top = max(w)
        v = [x / top for x in w]
    raise ToleranceNotReached(
        f"perron enclosure width {float(hi - lo):.3e} above {float(tol):.3e} "
        f"after {PERRON_ROUND_CAP} rounds"
    )


def perron_root(cm: CoveringMatrix, tol: float = 1e-9) -> CompactInterval:
    """Certified enclosure [lo, hi] of the spectral radius, hi - lo <= tol.

    The radius of a nonnegative matrix is the maximum over its irreducible
    classes, so each nontrivial strongly connected component is enclosed
    separately and the maxima are combined.
    """
    entries = cm.entries
    tol_f = Fraction(tol) if isinstance(tol, float) else as_fraction(tol)
    if tol_f <= 0:
        raise InvariantViolated("tolerance must be positive")
    best = CompactInterval(Fraction(0), Fraction(0))
    for comp in _strong_components(entries):
        if len(comp) == 1 and entries[comp[0]][comp[0]] == 0:
            continue
        enc = _component_perron(entries, comp, tol_f)
        best = CompactInterval(max(best.lo, enc.lo), max(best.hi, enc.hi))
    return best


def mixing_matrix_check(cm: CoveringMatrix) -> str:
    """Graph classification: "primitive", "irreducible-periodic(p)", or
    "reducible"."""
    entries = cm.entries
    n = len(entries)
    if n == 1:
        return "primitive" if entries[0][0] else "reducible"
    if len(_reachable(entries, 0, reverse=False)) != n:
        return "reducible"
    if len(_reachable(entries, 0, reverse=True)) != n:
        return "reducible"
    depth = {0: 0}
    frontier = [0]
    while frontier:
        nxt = []
        for u in frontier:
            for v in range(n):
                if entries[u][v] and v not in depth:
                    depth[v] = depth[u] + 1
                    nxt.append(v)
        frontier = nxt
    period = 0
    for u in range(n):
        for v in range(n):
            if entries[u][v]:
                period = math.gcd(period, depth[u] + 1 - depth[v])
    return "primitive" if period == 1 else f"irreducible-periodic({period})"


# ---------------------------------------------------------------------------
# Markov partitions and lap growth


def _require_pl_self_map(m: MapLike) -> PLMap:
    g = m.obj if isinstance(m, ExactMap) else m
    if not isinstance(g, PLMap):
        raise SelfMapRequired("the map must be piecewise linear on a compact interval")
    rng = g.range_on()
    if not g.domain.contains_interval(rng):
        raise SelfMapRequired(f"range {rng} escapes domain {g.domain}")
    return g


def markov_partition(m: MapLike, max_steps: int = 10) -> Optional[tuple[Fraction, ...]]:
    """Forward orbit closure of the node set, or None if it keeps growing."""
    g = _require_pl_self_map(m)
    points = {node[0] for node in g.nodes}
    for _ in range(max_steps):
        fresh = {g(p) for p in points} - points
        if not fresh:
            return tuple(sorted(points))
        points |= fresh
    return None


def lap_entropy_sequence(m: MapLike, n_max: int) -> tuple[tuple[int, int, float], ...]:
    """Rows (n, lap(m^n), log(lap)/n) for n = 1..n_max, computed exactly."""
    g = _require_pl_self_map(m)
    rows: list[tuple[int, int, float]] = []
    cur = g
    for n in range(1, n_max + 1):
        laps = cur.lap_count()
        rows.append((n, laps, math.log(laps) / n))
        if n < n_max:
            cur = compose(g, cur)
            if cur.piece_count() > LAP_NODE_CAP:
                raise PieceExplosion(
                    f"iterate {n + 1} has {cur.piece_count} pieces, cap {LAP_NODE_CAP}"
                )
    return tuple(rows)


# ---------------------------------------------------------------------------
# entropy sandwiches


@dataclass(frozen=True)
class EntropyBounds:
    """Certified sandwich: lower from horseshoe certificates, upper from a
    Lipschitz constant, with the exact comparison witness between them."""

    lower: LogValue
    upper: LogValue
    lower_source: str
    upper_source: str
    lower_enclosure: tuple[float, float]
    upper_enclosure: tuple[float, float]
    relation: str
    comparison: str


def cr_bounds(
    m: MapLike,
    certificates: Sequence[QuasiHorseshoe],
    lipschitz: RationalLike,
) -> EntropyBounds:
    """Entropy sandwich for m from verified certificates and a Lipschitz
    constant for the iterate the certificates live at.

    Lower bound: max over certificates of log(s)/iterate.  Upper bound:
    max{0, log(lipschitz)} / (largest certificate iterate), the certificates'
    iterate being the one the Lipschitz constant was certified for.
    """
    em = as_exact_map(m)
    for cert in certificates:
        rep = verify(cert, em)
        if not rep.ok:
            raise UncertifiedInput(
                f"certificate failed re-verification: {rep.reason}"
            )
    best_cert: Optional[QuasiHorseshoe] = None
    lower = LogValue(Fraction(1), 1)
    for cert in certificates:
        lv = LogValue(Fraction(cert.s), cert.iterate)
        if lower < lv:
            best_cert, lower = cert, lv
    if best_cert is None:
        lower_source = "no certificates"
    else:
        name = best_cert.map_id or "certificate"
        lower_source = f"{name}: {best_cert.s} pieces at iterate {best_cert.iterate}"
    lip = as_fraction(lipschitz)
    upper_div = max((cert.iterate for cert in certificates), default=1)
    upper = LogValue(lip if lip > 1 else Fraction(1), upper_div)
    upper_source = f"lipschitz constant {format_fraction(lip)} at iterate {upper_div}"
    relation, witness = compare_log_values(lower, upper)
    return EntropyBounds(
        lower=lower,
        upper=upper,
        lower_source=lower_source,
        upper_source=upper_source,
        lower_enclosure=lower.float_enclosure(),
        upper_enclosure=upper.float_enclosure(),
        relation=relation,
        comparison=witness,
    )
