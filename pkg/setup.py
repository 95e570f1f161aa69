"""Build script for the optional compiled IoU kernels.

The package is fully functional without the extension (a pure-Python
fallback is selected at import time); set OBMO3D_SKIP_EXT=1 to skip
compilation entirely.
"""

import os
import sys

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("OBMO3D_SKIP_EXT", "0") == "0":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "obmo3d.geometry._kernels",
                    sources=["src/obmo3d/geometry/_kernels.pyx"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        print("Cython not available; building without compiled kernels", file=sys.stderr)

setup(ext_modules=ext_modules)
