"""Build script for the optional compiled kernel extension.

The package works without the extension (a NumPy fallback is selected at
import time), so a failed build of ``lipact.backends._fast`` is not fatal:
install with ``LIPACT_NO_EXT=1 pip install -e .`` to skip it entirely.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("LIPACT_NO_EXT"):
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "lipact.backends._fast",
                sources=["src/lipact/backends/_fast.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
