"""Backend selection for the Smith normal form kernel.

The compiled int64 kernel is used when it imported cleanly and the
environment variable ``SIXTERMK_PURE_PYTHON`` is unset.  A call that
overflows 62 bits is transparently redone by the pure-Python kernel.
"""

import os

from . import _snf_py

try:
    from . import _snf_c
except ImportError:  # extension not built
    _snf_c = None

if _snf_c is not None and not os.environ.get("SIXTERMK_PURE_PYTHON"):
    BACKEND = "compiled"
else:
    BACKEND = "python"


def snf_lists(a, m, n, backend=None):
    backend = backend or BACKEND
    if backend == "compiled":
        if _snf_c is None:
            raise RuntimeError("compiled SNF kernel is not available")
        try:
            return _snf_c.snf_lists(a, m, n)
        except OverflowError:
            pass
    return _snf_py.snf_lists(a, m, n)


def compiled_available() -> bool:
    return _snf_c is not None
