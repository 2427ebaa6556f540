"""Kernel backend selection.

The compiled extension is used when it imports; otherwise, or when
``CLONEFEEDBACK_PURE=1`` is set, the pure-Python kernels are used.
"""

import os

from . import _purepy

if os.environ.get("CLONEFEEDBACK_PURE", "") not in ("", "0"):
    kernels = _purepy
    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels
    except ImportError:
        kernels = _purepy
        BACKEND = "python"
    else:
        BACKEND = "compiled"

rk4_lindblad = kernels.rk4_lindblad
iterate_affine = kernels.iterate_affine
