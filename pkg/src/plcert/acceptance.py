"""Machine-checked acceptance criteria for the whole package.

Each criterion is a standalone function returning a CriterionResult whose
details dict is JSON-able via report.to_jsonable.  run_acceptance executes
a subset (default: all) and never hides a failure: a criterion that raises
is reported failed with the exception, and a criterion whose stated claims
do not hold is reported failed with the measured values.

Criterion 10 currently fails: the exact interval propagation it requires is
implemented faithfully, and the measured iterates contradict every one of
the stated clauses.  The measured table is included in its details so the
discrepancy is auditable.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from .entropy import (
    CoveringMatrix,
    LogValue,
    compare_log_values,
    covering_matrix,
    cr_bounds,
    lap_entropy_sequence,
    markov_partition,
    mixing_matrix_check,
    perron_root,
)
from .errors import LambdaTooSmall
from .exact import CompactInterval
from .families import FamilyParams, make_F, make_G, make_H, make_fbar, make_phi, make_psi
from .horseshoe import (
    BitransitiveEvidence,
    SwapStructure,
    dichotomy,
    find_halfline,
    find_unique_fixed,
    loosen,
    quasihorseshoe,
    verify,
)
from .linemap import global_lipschitz, image_interval
from .maps import as_exact_map
from .plmap import plmap
from .properties import run_property_suites
from .specification import NotRefuted, refute_specification, travel_time_table

LAM = Fraction(16, 5)
TOL = 1e-9


@dataclass(frozen=True)
class CriterionResult:
    num: int
    title: str
    passed: bool
    details: dict


def _iv(lo, hi) -> CompactInterval:
    return CompactInterval(Fraction(lo), Fraction(hi))


def _hull(piece) -> CompactInterval:
    comps = (piece,) if isinstance(piece, CompactInterval) else tuple(piece)
    return CompactInterval(min(c.lo for c in comps), max(c.hi for c in comps))


def criterion_1() -> CriterionResult:
    """Family validation at lambda = 16/5."""
    p = FamilyParams(LAM)
    bps = (p.p1, p.q1, p.p2, p.p3, p.q2, p.p4)
    expected = (
        Fraction(5, 16), Fraction(21, 64), Fraction(11, 32),
        Fraction(21, 32), Fraction(43, 64), Fraction(11, 16),
    )
    ordered = all(a < b for a, b in zip(bps, bps[1:]))
    rejected = []
    for maker in (make_phi, make_psi):
        try:
            maker(3)
            rejected.append(False)
        except LambdaTooSmall:
            rejected.append(True)
    passed = bps == expected and ordered and all(rejected)
    return CriterionResult(1, "family validation at lambda = 16/5", passed, {
        "breakpoints": list(bps),
        "expected": list(expected),
        "strictly_ordered": ordered,
        "lambda_3_rejected": {"phi": rejected[0], "psi": rejected[1]},
    })


def criterion_2() -> CriterionResult:
    """Template extrema, exact."""
    phi = make_phi(LAM)
    psi = make_psi(LAM)
    r_phi = phi.range_on()
    r_psi = psi.range_on()
    want_phi = _iv(Fraction(-1, 64), Fraction(65, 64))
    want_psi = _iv(Fraction(-1, 20), Fraction(21, 20))
    passed = r_phi == want_phi and r_psi == want_psi
    return CriterionResult(2, "template extrema", passed, {
        "phi_range": r_phi, "psi_range": r_psi,
        "phi_expected": want_phi, "psi_expected": want_psi,
    })


def criterion_3() -> CriterionResult:
    """psi branch horseshoe: verify, loosen, cover, Perron enclosure."""
    psi = as_exact_map(make_psi(LAM))
    raw = quasihorseshoe(
        _iv(0, 1),
        [_iv(0, Fraction(21, 64)), _iv(Fraction(21, 64), Fraction(43, 64)),
         _iv(Fraction(43, 64), 1)],
        1,
    )
    rep = verify(raw, psi)
    cert = loosen(raw, psi)
    want_pieces = (
        _iv(0, Fraction(5, 16)),
        _iv(Fraction(11, 32), Fraction(21, 32)),
        _iv(Fraction(11, 16), 1),
    )
    got_pieces = tuple(_hull(p) for p in cert.pieces)
    cm = covering_matrix(psi, cert.pieces, cert.iterate)
    all_ones = all(e == 1 for row in cm.entries for e in row)
    root = perron_root(cm, TOL)
    contains3 = root.lo <= 3 <= root.hi
    narrow = float(root.hi - root.lo) <= TOL
    passed = (
        rep.ok
        and getattr(cert, "kind", "") == "loose"
        and got_pieces == want_pieces
        and all_ones
        and contains3
        and narrow
    )
    return CriterionResult(3, "psi branch 3-horseshoe", passed, {
        "raw_verified": rep.ok,
        "loosened_pieces": list(got_pieces),
        "expected_pieces": list(want_pieces),
        "kind": getattr(cert, "kind", ""),
        "covering_all_ones": all_ones,
        "mixing": mixing_matrix_check(cm),
        "perron_enclosure": root,
        "perron_contains_3": contains3,
        "perron_width_ok": narrow,
    })


def criterion_4() -> CriterionResult:
    """Lipschitz structure: constants never square under iteration."""
    F = as_exact_map(make_F(LAM))
    G = make_G(LAM)
    H = as_exact_map(make_H(LAM))
    lf = global_lipschitz(F.obj)
    lf2 = F.materialize(_iv(-4, 4), 2).lipschitz_const()
    lg = global_lipschitz(G)
    lh_windows = [
        H.restrict(_iv(Fraction(1, 8), 4)).lipschitz_const(),
        H.restrict(_iv(Fraction(1, 64), 1)).lipschitz_const(),
    ]
    passed = (
        lf == LAM and lf2 == LAM and lg == LAM and all(v == LAM for v in lh_windows)
    )
    return CriterionResult(4, "Lipschitz structure", passed, {
        "global_F": lf,
        "F_squared_on_[-4,4]": lf2,
        "not_lambda_squared": lf2 != LAM * LAM,
        "global_G": lg,
        "H_on_windows": lh_windows,
    })


def criterion_5() -> CriterionResult:
    """Fixed-point census on [-10, 10]."""
    w = _iv(-10, 10)
    fps_F = as_exact_map(make_F(LAM)).fixed_points(w)
    fps_G = as_exact_map(make_G(LAM)).fixed_points(w)
    want = (_iv(0, 0),)
    passed = fps_F == want and fps_G == want
    return CriterionResult(5, "fixed-point census", passed, {
        "F_fixed_points": list(fps_F),
        "G_fixed_points": list(fps_G),
        "expected": list(want),
    })


def criterion_6() -> CriterionResult:
    """Dichotomy: G swaps, F shows bitransitive evidence."""
    dG = dichotomy(make_G(LAM))
    dF = dichotomy(make_F(LAM))
    g_ok = isinstance(dG, SwapStructure) and dG.c == 0
    f_ok = isinstance(dF, BitransitiveEvidence)
    return CriterionResult(6, "swap/bitransitive dichotomy", g_ok and f_ok, {
        "G": dG, "F": dF,
        "G_is_swap_at_0": g_ok,
        "F_is_bitransitive_evidence": f_ok,
    })


def criterion_7() -> CriterionResult:
    """Unique-fixed-point certificate for F and its entropy sandwich."""
    F = as_exact_map(make_F(LAM))
    cert = find_unique_fixed(F)
    kind = getattr(cert, "kind", "")
    base_ok = getattr(cert, "base", None) == _iv(0, Fraction(65, 64))
    stated = (
        _iv(0, Fraction(21, 64)),
        _iv(Fraction(21, 64), Fraction(11, 16)),
        _iv(Fraction(11, 16), Fraction(65, 64)),
    )
    hulls = sorted((_hull(p) for p in cert.pieces), key=lambda h: h.lo)
    within = len(hulls) == 3 and all(
        s.contains_interval(h) for s, h in zip(stated, hulls)
    )
    bounds = cr_bounds(F, [cert], LAM)
    lower_ok = bounds.lower == LogValue(Fraction(3), 2)
    upper_ok = bounds.upper == LogValue(LAM, 2)
    sqrt3_le = LogValue(Fraction(3), 2) <= bounds.lower
    lo_enc = bounds.lower_enclosure
    hi_enc = bounds.upper_enclosure
    enc_ok = (
        lo_enc[1] - lo_enc[0] <= TOL
        and hi_enc[1] - hi_enc[0] <= TOL
        and abs(lo_enc[0] - math.log(3) / 2) <= TOL
        and abs(hi_enc[0] - math.log(16 / 5) / 2) <= TOL
    )
    passed = (
        kind == "loose" and base_ok and within
        and lower_ok and upper_ok
        and bounds.relation == "<" and bounds.comparison == "15 < 16"
        and sqrt3_le and enc_ok
    )
    return CriterionResult(7, "entropy sandwich for F via F^2 certificate", passed, {
        "kind": kind,
        "base": getattr(cert, "base", None),
        "pieces": [list(p) for p in cert.pieces],
        "pieces_within_stated": within,
        "lower": bounds.lower,
        "upper": bounds.upper,
        "relation": bounds.relation,
        "comparison": bounds.comparison,
        "log_sqrt3_le_lower": sqrt3_le,
        "enclosures_at_1e-9": enc_ok,
    })


def criterion_8() -> CriterionResult:
    """Half-line certificate for H and its entropy sandwich."""
    H = as_exact_map(make_H(LAM))
    cert = find_halfline(H)
    kind = getattr(cert, "kind", "")
    bounds = cr_bounds(H, [cert], LAM)
    lower_ok = bounds.lower == LogValue(Fraction(3), 1)
    upper_ok = bounds.upper == LogValue(LAM, 1)
    passed = kind == "loose" and lower_ok and upper_ok and bounds.relation == "<"
    return CriterionResult(8, "entropy sandwich for H", passed, {
        "kind": kind,
        "base": getattr(cert, "base", None),
        "pieces": [list(p) for p in cert.pieces],
        "lower": bounds.lower,
        "upper": bounds.upper,
        "relation": bounds.relation,
        "comparison": bounds.comparison,
    })


def counterexample_report() -> dict:
    """Entropy below log 2 alongside bitransitive evidence and a unique
    fixed point, with every claim certified exactly."""
    F = as_exact_map(make_F(LAM))
    cert = find_unique_fixed(F)
    bounds = cr_bounds(F, [cert], LAM)
    rel_log2, wit_log2 = compare_log_values(bounds.upper, LogValue(Fraction(2), 1))
    rel_raw, wit_raw = compare_log_values(LogValue(LAM, 1), LogValue(Fraction(4), 1))
    d = dichotomy(F.obj)
    census = F.fixed_points(_iv(-10, 10))
    return {
        "claim": "a bitransitive-evidence map with a unique fixed point whose "
                 "certified entropy upper bound lies strictly below log 2",
        "entropy_upper": bounds.upper,
        "upper_enclosure": list(bounds.upper_enclosure),
        "log2": math.log(2),
        "upper_below_log2": {"relation": rel_log2, "witness": wit_log2},
        "raw_comparison_16_5_vs_4": {"relation": rel_raw, "witness": wit_raw},
        "dichotomy": d,
        "fixed_points_in_[-10,10]": list(census),
        "entropy_lower": bounds.lower,
        "lower_enclosure": list(bounds.lower_enclosure),
    }


def criterion_9() -> CriterionResult:
    """Counterexample report: upper bound below log 2 despite bitransitive
    evidence and a unique fixed point."""
    rep = counterexample_report()
    below = rep["upper_below_log2"]["relation"] == "<"
    raw = rep["raw_comparison_16_5_vs_4"]
    raw_ok = raw["relation"] == "<" and raw["witness"] == "16 < 20"
    bitrans = isinstance(rep["dichotomy"], BitransitiveEvidence)
    unique = rep["fixed_points_in_[-10,10]"] == [_iv(0, 0)]
    passed = below and raw_ok and bitrans and unique
    return CriterionResult(9, "counterexample report below log 2", passed, {
        "report": rep,
        "upper_below_log2": below,
        "raw_16_5_below_4": raw_ok,
        "bitransitive_evidence": bitrans,
        "unique_fixed_point": unique,
    })


def criterion_10() -> CriterionResult:
    """Stated mixing diagnostic for iterated images of [0, 1] under F.

    Implemented exactly as stated.  The exact propagation contradicts all
    four clauses, so this criterion reports the measured failure.
    """
    F = make_F(LAM)
    rows = []
    for m in range(1, 31):
        k = image_interval(F, _iv(0, 1), m)
        rows.append((m, k.lo, k.hi))
    last = rows[-1]
    min_lt = last[1] < -10
    max_gt = last[2] > 10
    tail = rows[2:]
    min_noninc = all(b[1] <= a[1] for a, b in zip(tail, tail[1:]))
    max_nondec = all(b[2] >= a[2] for a, b in zip(tail, tail[1:]))
    passed = min_lt and max_gt and min_noninc and max_nondec
    return CriterionResult(10, "iterated-image growth clauses", passed, {
        "table": [
            {"m": m, "min": lo, "max": hi} for m, lo, hi in rows
        ],
        "min_below_-10_by_m30": min_lt,
        "max_above_10_by_m30": max_gt,
        "min_nonincreasing_from_m3": min_noninc,
        "max_nondecreasing_from_m3": max_nondec,
        "measured_m30": {"min": last[1], "max": last[2]},
    })


def criterion_11() -> CriterionResult:
    """Quantitative refutation: travel times, displacement, certificates."""
    F = make_F(LAM)
    H = make_H(LAM)
    fbar = make_fbar(LAM)
    table_F = travel_time_table(F, Fraction(1, 2), range(2, 9))
    growth_F = all(
        e.steps is not None and e.steps >= e.n - 1 for e in table_F.table
    )
    disp_ok = all(c.ok for c in table_F.displacement)
    disp_count = len(table_F.displacement)
    cert_F = refute_specification(F, Fraction(1, 2))
    cert_H = refute_specification(H, Fraction(1, 2))
    res_fbar = refute_specification(fbar, Fraction(1, 2))
    passed = (
        growth_F
        and disp_ok and disp_count == 16
        and not isinstance(cert_F, NotRefuted) and cert_F.growth_ok
        and not isinstance(cert_H, NotRefuted) and cert_H.growth_ok
        and isinstance(res_fbar, NotRefuted)
    )
    return CriterionResult(11, "quantitative refutation certificates", passed, {
        "travel_table_F": [(e.n, e.steps) for e in table_F.table],
        "t_n_ge_n_minus_1": growth_F,
        "displacement_checks": disp_count,
        "displacement_all_ok": disp_ok,
        "F_certificate": not isinstance(cert_F, NotRefuted),
        "H_certificate": not isinstance(cert_H, NotRefuted),
        "H_travel_table": [] if isinstance(cert_H, NotRefuted)
        else [(e.n, e.steps) for e in cert_H.table],
        "fbar_not_refuted": isinstance(res_fbar, NotRefuted),
        "fbar_reason": res_fbar.reason if isinstance(res_fbar, NotRefuted) else "",
    })


def criterion_12() -> CriterionResult:
    """Compactification conjugacy h(F(x)) = fbar(h(x)), exactly."""
    F = make_F(LAM)
    fbar = make_fbar(LAM)
    rng = random.Random(20260817)
    checked = 0
    bad = None
    for _ in range(100):
        den = rng.randint(1, 64)
        x = Fraction(rng.randint(-8 * den, 8 * den), den)
        if fbar.h(F(x)) != fbar(fbar.h(x)):
            bad = x
            break
        checked += 1
    edges_ok = (
        fbar(Fraction(0)) == 1
        and fbar(Fraction(1)) == 0
        and fbar.h(Fraction(0)) == Fraction(1, 2)
    )
    passed = bad is None and checked == 100 and edges_ok
    return CriterionResult(12, "compactification conjugacy", passed, {
        "points_checked": checked,
        "first_mismatch": bad,
        "fbar(0)": fbar(Fraction(0)),
        "fbar(1)": fbar(Fraction(1)),
        "h(0)": fbar.h(Fraction(0)),
    })


def criterion_13() -> CriterionResult:
    """Entropy unit oracles: Perron roots, lap growth, Markov partition."""
    perron_ok = {}
    for s in (2, 3, 5):
        cm = CoveringMatrix(
            tuple((_iv(i, i + 1),) for i in range(s)),
            tuple(tuple(1 for _ in range(s)) for _ in range(s)),
            1,
        )
        root = perron_root(cm, TOL)
        perron_ok[str(s)] = (
            root.lo <= s <= root.hi and float(root.hi - root.lo) <= TOL
        )
    tent = plmap(((0, 0), (Fraction(1, 2), 1), (1, 0)))
    tent3 = plmap(((0, 0), (Fraction(1, 3), 1), (Fraction(2, 3), 0), (1, 1)))
    rows2 = lap_entropy_sequence(tent, 8)
    rows3 = lap_entropy_sequence(tent3, 6)
    lap2_ok = all(
        lap == 2 ** n and abs(val - math.log(2)) <= TOL for n, lap, val in rows2
    )
    lap3_ok = all(
        lap == 3 ** n and abs(val - math.log(3)) <= TOL for n, lap, val in rows3
    )
    part = markov_partition(tent)
    part_ok = part == (Fraction(0), Fraction(1, 2), Fraction(1))
    passed = all(perron_ok.values()) and lap2_ok and lap3_ok and part_ok
    return CriterionResult(13, "entropy unit oracles", passed, {
        "perron_contains_s": perron_ok,
        "tent_lap_rows": [(n, lap) for n, lap, _ in rows2],
        "tent_lap_rate_is_log2": lap2_ok,
        "threefold_lap_rate_is_log3": lap3_ok,
        "tent_markov_partition": list(part) if part else None,
    })


def criterion_14() -> CriterionResult:
    """Randomized property suites on 100 seeded rational draws."""
    results = run_property_suites(seed=20260817, samples=100)
    passed = all(r.ok for r in results)
    return CriterionResult(14, "randomized property suites", passed, {
        "suites": [
            {"name": r.name, "ok": r.ok, "samples": r.samples, "detail": r.detail}
            for r in results
        ],
        "total_samples": sum(r.samples for r in results),
    })


CRITERIA: tuple[tuple[int, Callable[[], CriterionResult]], ...] = (
    (1, criterion_1), (2, criterion_2), (3, criterion_3), (4, criterion_4),
    (5, criterion_5), (6, criterion_6), (7, criterion_7), (8, criterion_8),
    (9, criterion_9), (10, criterion_10), (11, criterion_11),
    (12, criterion_12), (13, criterion_13), (14, criterion_14),
)


def run_acceptance(
    nums: Optional[Iterable[int]] = None,
) -> tuple[CriterionResult, ...]:
    """Run the requested criteria (default all); exceptions become failures."""
    wanted: Optional[Sequence[int]] = None if nums is None else sorted(set(nums))
    out = []
    for num, fn in CRITERIA:
        if wanted is not None and num not in wanted:
            continue
        try:
            out.append(fn())
        except Exception as exc:  # a crash is a failure, not a skip
            out.append(CriterionResult(
                num, fn.__doc__.splitlines()[0] if fn.__doc__ else "",
                False, {"error": f"{type(exc).__name__}: {exc}"},
            ))
    return tuple(out)


def summary_lines(results: Sequence[CriterionResult]) -> tuple[str, ...]:
    return tuple(
        f"criterion {r.num:02d} {'PASS' if r.passed else 'FAIL'}: {r.title}"
        for r in results
    )
