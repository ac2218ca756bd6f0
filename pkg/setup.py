"""Build script for the optional compiled kernels.

Set TREEPACK_NO_EXT=1 to skip compilation; the package then falls back to
the pure NumPy kernels at import time.
"""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("TREEPACK_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/treepack/kernels/_speedups.pyx"],
            language_level="3",
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
