"""Certified piecewise-linear dynamics: exact maps, horseshoe certificates,
entropy bounds, and specification refutation."""

__version__ = "0.1.0"

from .exact import CompactInterval, as_fraction, interval
from .plmap import PLMap, compose, iterate_map, plmap

__all__ = [
    "CompactInterval",
    "PLMap",
    "as_fraction",
    "compose",
    "interval",
    "iterate_map",
    "plmap",
    "__version__",
]
