"""Build script for the optional compiled kernel.

The package works without the extension (a pure-python fallback is selected
at import time), so a failed compile is downgraded to a warning.
"""

import warnings

from setuptools import setup

try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension

    extensions = cythonize(
        [
            Extension(
                "pwhyp._speedups",
                ["src/pwhyp/_speedups.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # pragma: no cover - build environment dependent
    warnings.warn(f"building without compiled kernel: {exc}")
    extensions = []

setup(ext_modules=extensions)
