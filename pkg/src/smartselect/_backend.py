"""Pick the compiled kernels when available, else the pure-Python ones.

Set ``SMARTSELECT_PURE=1`` to force the fallback.
"""
import os

from . import _pykernels as python_kernels

try:
    if os.environ.get("SMARTSELECT_PURE", "") not in ("", "0"):
        raise ImportError("pure-Python backend requested")
    from . import _kernels as compiled_kernels
except ImportError:
    compiled_kernels = None

kernels = compiled_kernels if compiled_kernels is not None else python_kernels
NAME = "cython" if compiled_kernels is not None else "python"
