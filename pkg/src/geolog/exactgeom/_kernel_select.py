"""Pick the integer kernel implementation at import time.

The compiled module works on machine integers and raises OverflowError when
an intermediate value leaves int64; every entry point here then retries with
the pure-Python kernel, so results never depend on which one ran.
Set GEOLOG_PURE_PYTHON=1 to force the fallback.
"""

from __future__ import annotations

import os

from . import _kernel_py as _py

_compiled = None
if os.environ.get("GEOLOG_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernel as _compiled  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"


def bareiss_rank(rows):
    if _compiled is not None:
        try:
            return _compiled.bareiss_rank(rows)
        except OverflowError:
            pass
    return _py.bareiss_rank(rows)


def bareiss_det(rows):
    if _compiled is not None:
        try:
            return _compiled.bareiss_det(rows)
        except OverflowError:
            pass
    return _py.bareiss_det(rows)


def dd_sweep(constraints, rays, zero_sets, order, k):
    if _compiled is not None and len(constraints) <= 62:
        try:
            return _compiled.dd_sweep(constraints, rays, zero_sets, order, k)
        except OverflowError:
            pass
    return _py.dd_sweep(constraints, rays, zero_sets, order, k)
