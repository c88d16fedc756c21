"""Select the elimination kernel: compiled extension if built, else pure Python.

Set ``LIFTLAB_PURE_PYTHON=1`` to force the fallback.
"""

import os

BACKEND = "python"

if os.environ.get("LIFTLAB_PURE_PYTHON") != "1":
    try:
        from ._kernels_c import reduce_row, rref_insert  # noqa: F401

        BACKEND = "compiled"
    except ImportError:
        pass

if BACKEND == "python":
    from ._kernels_py import reduce_row, rref_insert  # noqa: F401
