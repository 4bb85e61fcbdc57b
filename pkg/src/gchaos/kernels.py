"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
pure-Python ``_pykernels`` module serves the same API.  Setting
``GCHAOS_PURE_PYTHON=1`` forces the fallback.
"""

import os

from . import _pykernels

if os.environ.get("GCHAOS_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"

evaluate = _impl.evaluate
canonicalize = _impl.canonicalize
compose = _impl.compose
image = _impl.image
ball_extrema = _impl.ball_extrema

__all__ = ["BACKEND", "evaluate", "canonicalize", "compose", "image", "ball_extrema"]
