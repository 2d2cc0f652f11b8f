"""Select the compiled kernel backend when available.

Set ``MTFEDGE_PURE_PYTHON=1`` to force the numpy fallback.
"""
import os

from . import _pykernels

if os.environ.get("MTFEDGE_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = _impl.BACKEND
convolve2d = _impl.convolve2d
trace_chains = _impl.trace_chains
run_extents = _impl.run_extents
