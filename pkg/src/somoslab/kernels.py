"""Backend selection for the sparse polynomial kernels.

The compiled module is used when it imports; otherwise the pure-Python
implementation is used.  Setting ``SOMOSLAB_PURE=1`` forces the fallback.
"""

import os

if os.environ.get("SOMOSLAB_PURE", "") not in ("", "0"):
    from . import _kernels_py as _impl
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
        BACKEND = "cython"
    except ImportError:
        from . import _kernels_py as _impl
        BACKEND = "python"

add = _impl.add
sub = _impl.sub
scale = _impl.scale
shift = _impl.shift
mul = _impl.mul
sqr = _impl.sqr
divexact = _impl.divexact

__all__ = ["BACKEND", "add", "sub", "scale", "shift", "mul", "sqr", "divexact"]
