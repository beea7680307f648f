"""Pick the compiled kernels when importable, else the pure-Python ones.

Set ``SPLITSYNC_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels

if os.environ.get("SPLITSYNC_PURE_PYTHON"):
    kernels = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as kernels
        BACKEND = "cython"
    except ImportError:
        kernels = _pykernels
        BACKEND = "python"

BUDGET_EXCEEDED = _pykernels.BUDGET_EXCEEDED
