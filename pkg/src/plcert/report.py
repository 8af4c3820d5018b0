"""Deterministic report serialization.

Every result type in the package serializes through to_jsonable: rationals
become "p/q" strings (never floats), intervals become two-element lists of
rational strings, dataclasses become field dictionaries.  dumps_report then
emits key-sorted JSON, so identical inputs produce byte-identical reports.
"""

from __future__ import annotations

import dataclasses
import json
from fractions import Fraction
from typing import Any

from .entropy import LogValue
from .exact import CompactInterval, format_fraction
from .plmap import PLMap


def to_jsonable(obj: Any) -> Any:
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    if isinstance(obj, Fraction):
        return format_fraction(obj)
    if isinstance(obj, CompactInterval):
        return [format_fraction(obj.lo), format_fraction(obj.hi)]
    if isinstance(obj, LogValue):
        return {
            "symbolic": obj.symbolic,
            "enclosure": list(obj.float_enclosure()),
        }
    if isinstance(obj, PLMap):
        return {
            "nodes": [
                [format_fraction(x), format_fraction(y)] for x, y in obj.nodes
            ]
        }
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {
            f.name: to_jsonable(getattr(obj, f.name))
            for f in dataclasses.fields(obj)
        }
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj, key=repr) if isinstance(obj, (set, frozenset)) else obj
        return [to_jsonable(v) for v in items]
    raise TypeError(f"no report encoding for {type(obj).__name__}")


def dumps_report(obj: Any) -> str:
    """Key-sorted, indented JSON with a trailing newline."""
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2) + "\n"
