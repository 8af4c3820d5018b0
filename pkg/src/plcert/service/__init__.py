"""HTTP facade over the exact kernels.

The CLI calls the same handler functions in process; the service exposes
them over FastAPI for clients that want the reports without a local
install.  All payload rationals are strings, never floats.
"""

from .app import create_app

__all__ = ["create_app"]
