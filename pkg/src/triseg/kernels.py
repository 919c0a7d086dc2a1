"""Kernel selection: compiled extension if available, numpy fallback otherwise.

Set SEG_FORCE_FALLBACK=1 before import to skip the extension.  Both kernels
implement the same contract and produce bit-identical iterates.
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("SEG_FORCE_FALLBACK", "0") == "1":
    _impl = _kernels_py
    HAVE_COMPILED = False
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        HAVE_COMPILED = True
    except ImportError:
        _impl = _kernels_py
        HAVE_COMPILED = False

gs_sweeps = _impl.gs_sweeps
gs_sweeps_redblack = _impl.gs_sweeps_redblack
residual_max = _impl.residual_max

__all__ = ["gs_sweeps", "gs_sweeps_redblack", "residual_max", "HAVE_COMPILED"]
