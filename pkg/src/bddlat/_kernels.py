"""Kernel backend selection.

The compiled module is used when importable; set ``BDDLAT_PURE=1`` to force
the pure-Python implementation.
"""
import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("BDDLAT_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        pass

theta_sum = _impl.theta_sum
golden_min = _impl.golden_min
fp_enumerate = _impl.fp_enumerate


def backends():
    """Map of available backend name -> module."""
    found = {"python": _kernels_py}
    try:
        from . import _ckernels

        found["cython"] = _ckernels
    except ImportError:
        pass
    return found
