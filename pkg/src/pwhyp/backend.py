"""Kernel backend selection: compiled extension with pure-python fallback.

Set PWHYP_PURE_PYTHON=1 to force the fallback (used by the benchmark and
the parity tests).
"""

import os

if os.environ.get("PWHYP_PURE_PYTHON") == "1":
    from . import _kernel_py as kernel
else:
    try:
        from . import _speedups as kernel  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernel_py as kernel

COMPILED = kernel.COMPILED


def get_kernel(pure: bool = False):
    if pure:
        from . import _kernel_py

        return _kernel_py
    return kernel
