"""Select the compiled kernels when available, else the pure-Python fallback.

Set ``DIGRAPH_PSTAR_BACKEND=python`` to force the fallback.
"""

import os

if os.environ.get("DIGRAPH_PSTAR_BACKEND", "").lower() == "python":
    from . import _kernels_py as kernels
    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels
        BACKEND = "cython"
    except ImportError:
        from . import _kernels_py as kernels
        BACKEND = "python"

__all__ = ["kernels", "BACKEND"]
