"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
numpy implementations in ``_pykernels`` take over. Set
``PRICEDQUERY_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels

python_backend = _pykernels
compiled_backend = None

if os.environ.get("PRICEDQUERY_PURE_PYTHON", "") not in ("", "0"):
    _active = _pykernels
else:
    try:
        from . import _ckernels as compiled_backend
    except ImportError:
        _active = _pykernels
    else:
        _active = compiled_backend

BACKEND = "compiled" if _active is not _pykernels else "python"

flip_counts = _active.flip_counts
subcube_ones = _active.subcube_ones
opt_table = _active.opt_table
