"""Selects the kernel implementation at import time.

The compiled extension is preferred. Setting ``GRAPHBATCH_PURE_PYTHON=1``
forces the fallback, as does a missing or broken build.
"""

import os

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKENDS = {"python": _kernels_py}
if _compiled is not None:
    BACKENDS["cython"] = _compiled


def _default():
    if os.environ.get("GRAPHBATCH_PURE_PYTHON", "") not in ("", "0"):
        return "python"
    return "cython" if _compiled is not None else "python"


name = _default()
kernels = BACKENDS[name]


def set_backend(backend):
    """Switch the active kernels; returns the previous backend name."""
    global name, kernels
    if backend not in BACKENDS:
        raise ValueError(f"backend {backend!r} unavailable; have {sorted(BACKENDS)}")
    previous = name
    name = backend
    kernels = BACKENDS[backend]
    return previous
