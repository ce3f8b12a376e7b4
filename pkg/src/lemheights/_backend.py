"""Pick the kernel implementation at import time.

The compiled extension is used when it imports; setting
``LEMHEIGHTS_PURE_PYTHON=1`` forces the numpy fallback.
"""

import os

from . import _pykernels

if os.environ.get("LEMHEIGHTS_PURE_PYTHON", "") not in ("", "0"):
    kernels = _pykernels
    NAME = "python"
else:
    try:
        from . import _ckernels as kernels
        NAME = "cython"
    except ImportError:
        kernels = _pykernels
        NAME = "python"

aberth_batch = kernels.aberth_batch
level_sweep = kernels.level_sweep
