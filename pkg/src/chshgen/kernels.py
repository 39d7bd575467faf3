"""Backend selection for the sweep kernels.

The compiled extension is used when it imports; setting ``CHSHGEN_PURE_PYTHON=1``
forces the numpy fallback.
"""
import os

from . import _kernels_py

if os.environ.get("CHSHGEN_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = "compiled" if _impl is not _kernels_py else "python"

scoring_mass = _impl.scoring_mass
win_surfaces = _impl.win_surfaces
max_ties = _impl.max_ties
