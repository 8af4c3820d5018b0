"""The parametrized example family: templates phi/psi and the line maps built
from them.

All constructors take one exact rational parameter lam (> 3). Breakpoints and
node values are closed-form rationals in lam; continuity at every interior
breakpoint is re-derived from the per-piece formulas and checked exactly at
construction time.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ContinuityViolated, LambdaTooSmall, InvariantViolated
from .exact import RationalLike, as_fraction
from .linemap import (
    DyadicCompactification,
    DyadicMirrorTiled,
    HalfLineTiled,
    MirrorTranslationTiled,
    compactify,
)
from .plmap import PLMap


@dataclass(frozen=True)
class FamilyParams:
    lam: Fraction

    def __post_init__(self):
        lam = as_fraction(self.lam)
        if lam <= 3:
            raise LambdaTooSmall(f"family needs lambda > 3, got {lam}")
        object.__setattr__(self, "lam", lam)
        # Each adjacency below is equivalent to lam > 3; checked anyway so a
        # future formula edit cannot silently break the ordering.
        chain = (
            Fraction(0),
            self.p1,
            self.q1,
            self.p2,
            self.p3,
            self.q2,
            self.p4,
            Fraction(1),
        )
        for a, b in zip(chain, chain[1:]):
            if not a < b:
                raise InvariantViolated(
                    f"breakpoint ordering failed at lambda={lam}: {a} !< {b}"
                )

    @property
    def p1(self) -> Fraction:
        return 1 / self.lam

    @property
    def q1(self) -> Fraction:
        return (self.lam + 1) / (4 * self.lam)

    @property
    def p2(self) -> Fraction:
        return (self.lam - 1) / (2 * self.lam)

    @property
    def p3(self) -> Fraction:
        return (self.lam + 1) / (2 * self.lam)

    @property
    def q2(self) -> Fraction:
        return (3 * self.lam - 1) / (4 * self.lam)

    @property
    def p4(self) -> Fraction:
        return (self.lam - 1) / self.lam


def _params(lam: RationalLike | FamilyParams) -> FamilyParams:
    if isinstance(lam, FamilyParams):
        return lam
    return FamilyParams(as_fraction(lam))


def _build_checked(pieces) -> PLMap:
    """Assemble a PLMap from (left_x, right_x, formula) pieces.

    Adjacent formulas must agree exactly at the shared breakpoint.
    """
    nodes = []
    prev_right = None
    prev_val = None
    for left, right, fn in pieces:
        val_left = fn(left)
        if prev_right is not None:
            if left != prev_right:
                raise InvariantViolated("pieces are not contiguous")
            if val_left != prev_val:
                raise ContinuityViolated(
                    f"piece formulas disagree at x={left}: {prev_val} vs {val_left}"
                )
        else:
            nodes.append((left, val_left))
        nodes.append((right, fn(right)))
        prev_right, prev_val = right, fn(right)
    return PLMap(tuple(nodes))


def make_phi(lam: RationalLike | FamilyParams) -> PLMap:
    """Seven-piece template: slopes -lam, -1, +1, +lam, +1, -1, -lam."""
    p = _params(lam)
    lam = p.lam
    lo_mid = (3 - lam) / (4 * lam)
    hi_mid = (5 * lam - 3) / (4 * lam)
    pieces = (
        (Fraction(0), p.p1, lambda x: 1 - lam * x),
        (p.p1, p.q1, lambda x: p.p1 - x),
        (p.q1, p.p2, lambda x: lo_mid + (x - p.q1)),
        (p.p2, p.p3, lambda x: lam * (x - p.p2)),
        (p.p3, p.q2, lambda x: 1 + (x - p.p3)),
        (p.q2, p.p4, lambda x: hi_mid - (x - p.q2)),
        (p.p4, Fraction(1), lambda x: lam * (1 - x)),
    )
    return _build_checked(pieces)


def make_psi(lam: RationalLike | FamilyParams) -> PLMap:
    """Three-piece template: slopes -lam, +lam, -lam."""
    p = _params(lam)
    lam = p.lam
    v1 = (3 - lam) / 4
    v2 = (lam + 1) / 4
    pieces = (
        (Fraction(0), p.q1, lambda x: 1 - lam * x),
        (p.q1, p.q2, lambda x: v1 + lam * (x - p.q1)),
        (p.q2, Fraction(1), lambda x: v2 - lam * (x - p.q2)),
    )
    return _build_checked(pieces)


def make_F(lam: RationalLike | FamilyParams) -> MirrorTranslationTiled:
    return MirrorTranslationTiled(make_phi(lam))


def make_G(lam: RationalLike | FamilyParams) -> DyadicMirrorTiled:
    return DyadicMirrorTiled(make_psi(lam))


def make_H(lam: RationalLike | FamilyParams) -> HalfLineTiled:
    return HalfLineTiled(make_G(lam))


def make_fbar(lam: RationalLike | FamilyParams) -> DyadicCompactification:
    return compactify(make_F(lam))
