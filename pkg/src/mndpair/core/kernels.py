"""Kernel backend selection.

The compiled extension is used when it was built; setting
``MNDPAIR_PURE_PYTHON=1`` forces the pure-Python twin.
"""

from __future__ import annotations

import os

from . import _pykernels

if os.environ.get("MNDPAIR_PURE_PYTHON"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

FIELD = _pykernels.FIELD
MASK = _pykernels.MASK

mul = _impl.mul
add = _impl.add
axpy = _impl.axpy
scale = _impl.scale
truncate = _impl.truncate
extract = _impl.extract
split = _impl.split
deriv = _impl.deriv
shift_key = _impl.shift_key
