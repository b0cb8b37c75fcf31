"""Numerical core: RK4 propagation kernel.

Prefers the compiled Cython extension and falls back to the pure-numpy
implementation when the extension was not built.  ``AGDOPS_FORCE_NUMPY=1``
forces the fallback (used by the benchmark to compare backends).
"""

import os

from . import _propagate_py

if os.environ.get("AGDOPS_FORCE_NUMPY") == "1":
    _impl = _propagate_py
else:
    try:
        from . import _propagate_cy as _impl
    except ImportError:
        _impl = _propagate_py

propagate = _impl.propagate
BACKEND = _impl.BACKEND

propagate_numpy = _propagate_py.propagate

__all__ = ["propagate", "propagate_numpy", "BACKEND"]
