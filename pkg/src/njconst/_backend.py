"""Kernel backend selection: compiled extension if available, numpy fallback.

NJCONST_BACKEND=python forces the fallback; NJCONST_BACKEND=cython demands
the extension and raises if it is missing.
"""

import os

from . import _kernels_py

_requested = os.environ.get("NJCONST_BACKEND", "").strip().lower()

if _requested == "python":
    kernels = _kernels_py
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        if _requested == "cython":
            raise
        kernels = _kernels_py

BACKEND: str = kernels.BACKEND
