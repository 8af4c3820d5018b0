"""Randomized property suites over the exact kernels.

Every suite draws rational inputs from a seeded generator and checks an
exact identity, so failures are reproducible witnesses rather than flaky
tolerances.  run_property_suites distributes a fixed number of draws over
the five suites and reports one result per suite.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .entropy import covering_matrix
from .exact import CompactInterval
from .families import make_F, make_G, make_phi, make_psi
from .horseshoe import loosen, quasihorseshoe, verify
from .maps import as_exact_map
from .plmap import PLMap, compose, monotone_laps, plmap

DEFAULT_SEED = 20260817


@dataclass(frozen=True)
class PropertyResult:
    name: str
    ok: bool
    samples: int
    detail: str = ""


def _rand_fraction(rng: random.Random, lo: int, hi: int, max_den: int = 64) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(lo * den, hi * den), den)


def _rand_lambda(rng: random.Random) -> Fraction:
    den = rng.randint(2, 64)
    num = rng.randint(3 * den + 1, 5 * den - 1)
    return Fraction(num, den)


def _rand_plmap(rng: random.Random) -> PLMap:
    count = rng.randint(2, 6)
    xs = sorted({_rand_fraction(rng, -4, 4) for _ in range(count + 1)})
    while len(xs) < 2:
        xs = sorted({_rand_fraction(rng, -4, 4) for _ in range(count + 1)})
    nodes = tuple((x, _rand_fraction(rng, -4, 4)) for x in xs)
    return plmap(nodes)


def _sample_in(rng: random.Random, w: CompactInterval) -> Fraction:
    t = Fraction(rng.randint(0, 2 ** 20), 2 ** 20)
    return w.lo + t * (w.hi - w.lo)


def _suite_compose_identity(rng: random.Random, samples: int) -> PropertyResult:
    """compose(identity, f) and compose(f, identity) agree with f pointwise."""
    for k in range(samples):
        f = _rand_plmap(rng)
        rng_hull = f.range_on()
        if rng_hull.is_point():
            rng_hull = CompactInterval(rng_hull.lo, rng_hull.lo + 1)
        ident_out = plmap(((rng_hull.lo, rng_hull.lo), (rng_hull.hi, rng_hull.hi)))
        ident_in = plmap(((f.domain.lo, f.domain.lo), (f.domain.hi, f.domain.hi)))
        left = compose(ident_out, f)
        right = compose(f, ident_in)
        for _ in range(3):
            x = _sample_in(rng, f.domain)
            if left(x) != f(x) or right(x) != f(x):
                return PropertyResult(
                    "compose-identity", False, k + 1,
                    f"mismatch at x={x} for nodes {f.nodes}",
                )
    return PropertyResult("compose-identity", True, samples)


def _suite_range_attainment(rng: random.Random, samples: int) -> PropertyResult:
    """range_on endpoints are attained at nodes of the restriction."""
    for k in range(samples):
        f = _rand_plmap(rng)
        a = _sample_in(rng, f.domain)
        b = _sample_in(rng, f.domain)
        if a == b:
            continue
        w = CompactInterval(min(a, b), max(a, b))
        r = f.range_on(w)
        ys = [y for _, y in f.restrict(w).nodes]
        if min(ys) != r.lo or max(ys) != r.hi:
            return PropertyResult(
                "range-attainment", False, k + 1,
                f"range {r} not attained on {w} for nodes {f.nodes}",
            )
    return PropertyResult("range-attainment", True, samples)


def _suite_homogeneity(rng: random.Random, samples: int) -> PropertyResult:
    """G(x/2) = G(x)/2 on the negative half line."""
    for k in range(samples):
        lam = _rand_lambda(rng)
        g = make_G(lam)
        x = -_rand_fraction(rng, 1, 8, max_den=32)
        if x >= 0:
            continue
        for probe in (x, x / 2, x / 4):
            if g(probe / 2) != g(probe) / 2:
                return PropertyResult(
                    "dyadic-homogeneity", False, k + 1,
                    f"G({probe}/2) != G({probe})/2 at lambda={lam}",
                )
    return PropertyResult("dyadic-homogeneity", True, samples)


def _suite_tile_continuity(rng: random.Random, samples: int) -> PropertyResult:
    """Restrictions across tile boundaries agree with pointwise evaluation,
    and the templates glue: phi(0)=1, phi(1)=0, psi(0)=1, psi(1)=0."""
    for k in range(samples):
        lam = _rand_lambda(rng)
        phi = make_phi(lam)
        psi = make_psi(lam)
        if phi(0) != 1 or phi(1) != 0 or psi(0) != 1 or psi(1) != 0:
            return PropertyResult(
                "tile-continuity", False, k + 1, f"template edges at lambda={lam}"
            )
        fm = as_exact_map(make_F(lam))
        n = -rng.randint(1, 6)
        w = CompactInterval(Fraction(n) - Fraction(1, 2), Fraction(n) + Fraction(1, 2))
        g = fm.restrict(w)
        for _ in range(3):
            x = _sample_in(rng, w)
            if g(x) != fm(x):
                return PropertyResult(
                    "tile-continuity", False, k + 1,
                    f"restriction mismatch at x={x}, lambda={lam}",
                )
        gm = as_exact_map(make_G(lam))
        kk = rng.randint(0, 6)
        wk = CompactInterval(-Fraction(3, 2) / 2 ** kk, -Fraction(3, 4) / 2 ** kk)
        gg = gm.restrict(wk)
        for _ in range(2):
            x = _sample_in(rng, wk)
            if gg(x) != gm(x):
                return PropertyResult(
                    "tile-continuity", False, k + 1,
                    f"dyadic restriction mismatch at x={x}, lambda={lam}",
                )
    return PropertyResult("tile-continuity", True, samples)


def _suite_cert_reverify(rng: random.Random, samples: int) -> PropertyResult:
    """Loosened template certificates re-verify and cover, across lambda."""
    for k in range(samples):
        lam = _rand_lambda(rng)
        psi = make_psi(lam)
        laps = monotone_laps(psi)
        if len(laps) != 3:
            return PropertyResult(
                "certificate-reverify", False, k + 1,
                f"psi at lambda={lam} has {len(laps)} laps",
            )
        base = CompactInterval(Fraction(0), Fraction(1))
        raw = quasihorseshoe(base, list(laps), 1)
        em = as_exact_map(psi)
        rep = verify(raw, em)
        if not rep.ok:
            return PropertyResult(
                "certificate-reverify", False, k + 1,
                f"raw branch certificate failed at lambda={lam}: {rep.reason}",
            )
        cert = loosen(raw, em)
        if not hasattr(cert, "kind") or getattr(cert, "kind", "") != "loose":
            return PropertyResult(
                "certificate-reverify", False, k + 1,
                f"loosen at lambda={lam} returned {type(cert).__name__}",
            )
        rep2 = verify(cert, em)
        if not (rep2.ok and rep2.kind == "loose"):
            return PropertyResult(
                "certificate-reverify", False, k + 1,
                f"loosened certificate failed at lambda={lam}",
            )
        cm = covering_matrix(em, cert.pieces, cert.iterate)
        if any(e != 1 for row in cm.entries for e in row):
            return PropertyResult(
                "certificate-reverify", False, k + 1,
                f"covering matrix not all-ones at lambda={lam}",
            )
    return PropertyResult("certificate-reverify", True, samples)


def run_property_suites(
    seed: int = DEFAULT_SEED, samples: int = 100
) -> tuple[PropertyResult, ...]:
    """Five exact property suites sharing `samples` seeded random draws."""
    rng = random.Random(seed)
    per = max(1, samples // 5)
    return (
        _suite_compose_identity(rng, per),
        _suite_range_attainment(rng, per),
        _suite_homogeneity(rng, per),
        _suite_tile_continuity(rng, per),
        _suite_cert_reverify(rng, per),
    )
