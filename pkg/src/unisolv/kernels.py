"""Backend selection for the elimination kernels.

The compiled ``_ckernels`` extension is used when importable; otherwise the
pure-Python ``_pykernels`` module.  Setting ``UNISOLV_PURE_PYTHON=1`` forces
the fallback.
"""

import os

from . import _pykernels

if os.environ.get("UNISOLV_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"

det_int = _impl.det_int
det_gauss = _impl.det_gauss
rref_int = _impl.rref_int

__all__ = ["BACKEND", "det_int", "det_gauss", "rref_int"]
