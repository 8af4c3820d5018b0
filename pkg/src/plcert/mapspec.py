"""Mapspec parsing and resolution.

A mapspec is a small JSON document selecting either a named family member
("phi" | "psi" | "F" | "G" | "H" | "fbar" plus a lambda parameter) or an
explicit piecewise-linear map as a node list.  Rationals cross the boundary
as strings like "16/5", never as floats.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Union

from .errors import (
    ContinuityViolated,
    InvariantViolated,
    LambdaTooSmall,
    ParseError,
    ValidationError,
)
from .exact import as_fraction, format_fraction
from .families import make_F, make_G, make_H, make_fbar, make_phi, make_psi
from .maps import ExactMap, as_exact_map
from .plmap import plmap

FAMILIES: dict[str, Callable] = {
    "phi": make_phi,
    "psi": make_psi,
    "F": make_F,
    "G": make_G,
    "H": make_H,
    "fbar": make_fbar,
}


@dataclass(frozen=True)
class MapSpec:
    family: Optional[str] = None
    lam: Optional[Fraction] = None
    nodes: Optional[tuple[tuple[Fraction, Fraction], ...]] = None

    @property
    def is_family(self) -> bool:
        return self.family is not None


def _parse_rational(value: object, where: str) -> Fraction:
    if isinstance(value, float):
        raise ValidationError(f"{where}: floats are not accepted, write a rational string")
    if not isinstance(value, (str, int)):
        raise ValidationError(f"{where}: expected a rational string, got {type(value).__name__}")
    try:
        return as_fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"{where}: {exc}") from exc


def parse_mapspec(text: str) -> MapSpec:
    """Exact parse of a mapspec document; diagnostics carry line/column."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(doc, dict):
        raise ValidationError("top level must be a JSON object")
    keys = set(doc)
    if "family" in keys:
        extra = keys - {"family", "lambda"}
        if extra:
            raise ValidationError(f"unknown fields: {sorted(extra)}")
        if "lambda" not in keys:
            raise ValidationError('family selection needs a "lambda" field')
        name = doc["family"]
        if name not in FAMILIES:
            raise ValidationError(
                f'unknown family {name!r}; choose one of {sorted(FAMILIES)}'
            )
        lam = _parse_rational(doc["lambda"], '"lambda"')
        try:
            FAMILIES[name](lam)
        except LambdaTooSmall as exc:
            raise ValidationError(f'"lambda": {exc}') from exc
        return MapSpec(family=name, lam=lam)
    if keys == {"plmap"}:
        body = doc["plmap"]
        if not isinstance(body, dict) or set(body) != {"nodes"}:
            raise ValidationError('"plmap" must be an object with exactly a "nodes" field')
        raw = body["nodes"]
        if not isinstance(raw, list) or len(raw) < 2:
            raise ValidationError('"nodes" must be a list of at least two [x, y] pairs')
        nodes = []
        for i, pair in enumerate(raw):
            if not isinstance(pair, list) or len(pair) != 2:
                raise ValidationError(f'"nodes"[{i}]: expected an [x, y] pair')
            x = _parse_rational(pair[0], f'"nodes"[{i}][0]')
            y = _parse_rational(pair[1], f'"nodes"[{i}][1]')
            nodes.append((x, y))
        try:
            plmap(nodes)
        except (ContinuityViolated, InvariantViolated) as exc:
            raise ValidationError(f'"nodes": {exc}') from exc
        return MapSpec(nodes=tuple(nodes))
    raise ValidationError(
        'document must contain either "family" and "lambda", or "plmap"'
    )


def serialize_mapspec(spec: MapSpec) -> str:
    """Canonical textual form; parse_mapspec round-trips it."""
    if spec.is_family:
        doc = {"family": spec.family, "lambda": format_fraction(spec.lam)}
    else:
        doc = {
            "plmap": {
                "nodes": [
                    [format_fraction(x), format_fraction(y)]
                    for x, y in spec.nodes
                ]
            }
        }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def resolve(spec: MapSpec) -> ExactMap:
    """Build the evaluator a MapSpec selects, with a stable map identifier."""
    if spec.is_family:
        obj = FAMILIES[spec.family](spec.lam)
        return as_exact_map(obj, map_id=f"{spec.family}[{format_fraction(spec.lam)}]")
    digest = hashlib.sha256(serialize_mapspec(spec).encode()).hexdigest()[:12]
    return as_exact_map(plmap(spec.nodes), map_id=f"plmap#{digest}")
