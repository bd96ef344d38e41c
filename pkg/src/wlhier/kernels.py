"""Backend selection for the refinement kernels.

The compiled extension is used when it was built; otherwise the pure-Python
twin takes over. ``WLHIER_BACKEND=python`` forces the fallback.
"""

from __future__ import annotations

import os

from wlhier import _pykernels

try:
    from wlhier import _ckernels
except ImportError:  # extension not built
    _ckernels = None

REFINE_TAG = 0

_BACKENDS = {"python": _pykernels.Interner}
if _ckernels is not None:
    _BACKENDS["cython"] = _ckernels.Interner

_requested = os.environ.get("WLHIER_BACKEND", "").strip().lower()
if _requested and _requested not in _BACKENDS:
    raise ImportError(f"WLHIER_BACKEND={_requested!r} is not available; have {sorted(_BACKENDS)}")
BACKEND = _requested or ("cython" if _ckernels is not None else "python")


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def new_interner(backend: str | None = None):
    return _BACKENDS[backend or BACKEND]()
