"""Transport-agnostic operation handlers.

Each handler takes plain JSON-compatible inputs, does the exact work, and
returns a JSON-compatible dict.  The CLI calls these directly; the FastAPI
app routes requests to them.  Domain failures propagate as PLCertError so
each caller can map them to its own failure channel (HTTP 400 / exit 1).
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Optional, Sequence

from ..acceptance import run_acceptance, summary_lines
from ..entropy import covering_matrix, cr_bounds, mixing_matrix_check, perron_root
from ..errors import ValidationError
from ..exact import CompactInterval, as_fraction
from ..figures import render_plot
from ..horseshoe import (
    QuasiHorseshoe,
    TightReport,
    find_halfline,
    find_two_fixed,
    find_unique_fixed,
    quasihorseshoe,
    verify,
)
from ..linemap import (
    DyadicCompactification,
    DyadicMirrorTiled,
    HalfLineTiled,
    MirrorTranslationTiled,
)
from ..maps import ExactMap
from ..mapspec import parse_mapspec, resolve
from ..plmap import PLMap
from ..report import to_jsonable
from ..specification import NotRefuted, refute_specification


def _rational(value: object, where: str) -> Fraction:
    if not isinstance(value, (str, int)):
        raise ValidationError(f"{where}: expected a rational string, got {value!r}")
    try:
        return as_fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"{where}: {exc}") from exc


def _window(pair: Sequence[object], where: str = "window") -> CompactInterval:
    if len(pair) != 2:
        raise ValidationError(f"{where}: expected [lo, hi]")
    return CompactInterval(_rational(pair[0], where), _rational(pair[1], where))


def resolve_map(map_obj: dict) -> ExactMap:
    """Mapspec object -> ExactMap, with the mapspec module's diagnostics."""
    return resolve(parse_mapspec(json.dumps(map_obj)))


def _pick_finder(em: ExactMap, variant: str):
    if variant == "two-fixed":
        return find_two_fixed
    if variant == "halfline":
        return find_halfline
    if variant == "unique-fixed":
        return find_unique_fixed
    obj = em.obj
    if isinstance(obj, HalfLineTiled):
        return find_halfline
    if isinstance(obj, (MirrorTranslationTiled, DyadicMirrorTiled, DyadicCompactification)):
        return find_unique_fixed
    if isinstance(obj, PLMap):
        return find_two_fixed
    return find_unique_fixed


def _cert_payload(h: QuasiHorseshoe) -> dict:
    return {
        "base": h.base,
        "pieces": [list(p) for p in h.pieces],
        "iterate": h.iterate,
        "s": h.s,
        "kind": h.kind,
        "map_id": h.map_id,
    }


def cert_from_payload(d: dict) -> QuasiHorseshoe:
    base = _window(d.get("base", ()), '"base"')
    pieces_raw = d.get("pieces")
    if not isinstance(pieces_raw, Sequence) or not pieces_raw:
        raise ValidationError('"pieces": expected a nonempty list')
    pieces = []
    for i, piece in enumerate(pieces_raw):
        if not isinstance(piece, Sequence) or not piece:
            raise ValidationError(f'"pieces"[{i}]: expected a list of intervals')
        pieces.append(tuple(_window(c, f'"pieces"[{i}]') for c in piece))
    iterate = d.get("iterate", 1)
    if not isinstance(iterate, int) or iterate < 1:
        raise ValidationError('"iterate": expected an integer >= 1')
    return quasihorseshoe(base, pieces, iterate)


def eval_map(map_obj: dict, x: object) -> dict:
    em = resolve_map(map_obj)
    xf = _rational(x, '"x"')
    return to_jsonable({"map_id": em.map_id, "x": xf, "value": em(xf)})


def fixed_points(map_obj: dict, window: Sequence[object], iterate: int = 1) -> dict:
    em = resolve_map(map_obj)
    w = _window(window)
    if iterate == 1:
        fps = em.fixed_points(w)
    else:
        fps = em.materialize(w, iterate).fixed_points(within=w)
    return to_jsonable({
        "map_id": em.map_id,
        "window": w,
        "iterate": iterate,
        "fixed_points": list(fps),
    })


def plot(map_obj: dict, window: Sequence[object], iterate: int = 1,
         out_path: Optional[str] = None) -> dict:
    em = resolve_map(map_obj)
    w = _window(window)
    svg = render_plot(em, w, iterate, out_path)
    return {"map_id": em.map_id, "svg": svg}


def find_horseshoe(map_obj: dict, variant: str = "auto") -> dict:
    em = resolve_map(map_obj)
    finder = _pick_finder(em, variant)
    result = finder(em)
    if isinstance(result, TightReport):
        return to_jsonable({
            "map_id": em.map_id,
            "found": True,
            "kind": "tight",
            "certificate": {
                "base": result.base,
                "pieces": [list(p) for p in result.pieces],
                "iterate": result.iterate,
                "s": len(result.pieces),
            },
            "note": result.message,
        })
    return to_jsonable({
        "map_id": em.map_id,
        "found": True,
        "kind": result.kind,
        "certificate": _cert_payload(result),
    })


def verify_horseshoe(map_obj: dict, certificate: dict) -> dict:
    em = resolve_map(map_obj)
    cert = cert_from_payload(certificate)
    rep = verify(cert, em)
    return to_jsonable({
        "map_id": em.map_id,
        "ok": rep.ok,
        "kind": rep.kind,
        "reason": rep.reason,
        "witness": rep.witness,
        "images": list(rep.images),
        "certificate": _cert_payload(cert),
    })


def _as_cert(result) -> QuasiHorseshoe:
    if isinstance(result, TightReport):
        return quasihorseshoe(result.base, list(result.pieces), result.iterate,
                              result.map_id, "tight")
    return result


def entropy(map_obj: dict, variant: str = "auto", tol: float = 1e-9) -> dict:
    em = resolve_map(map_obj)
    cert = _as_cert(_pick_finder(em, variant)(em))
    bounds = cr_bounds(em, [cert], em.lipschitz())
    cm = covering_matrix(em, cert.pieces, cert.iterate)
    root = perron_root(cm, tol)
    return to_jsonable({
        "map_id": em.map_id,
        "certificate": _cert_payload(cert),
        "bounds": bounds,
        "covering_matrix": {
            "entries": [list(row) for row in cm.entries],
            "iterate": cm.iterate,
            "classification": mixing_matrix_check(cm),
        },
        "perron_enclosure": root,
    })


def spec_refute(map_obj: dict, eps: object = "1/2") -> dict:
    em = resolve_map(map_obj)
    eps_f = _rational(eps, '"eps"')
    result = refute_specification(em, eps_f)
    refuted = not isinstance(result, NotRefuted)
    return to_jsonable({
        "map_id": em.map_id,
        "eps": eps_f,
        "refuted": refuted,
        "result": result,
    })


def acceptance(criteria: Optional[Sequence[int]] = None) -> dict:
    if criteria is not None:
        bad = sorted({int(n) for n in criteria} - set(range(1, 15)))
        if bad:
            raise ValidationError(f'"criteria": unknown criterion numbers {bad}')
    results = run_acceptance(criteria)
    return to_jsonable({
        "all_passed": all(r.passed for r in results),
        "summary": list(summary_lines(results)),
        "results": [
            {
                "num": r.num,
                "title": r.title,
                "passed": r.passed,
                "details": r.details,
            }
            for r in results
        ],
    })
