"""Build script for the optional compiled elimination kernel.

The package is fully functional without the extension (a pure-Python
twin is selected at import time); set BASISFILL_NO_EXT=1 to skip the
build entirely.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("BASISFILL_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("basisfill._gfcore", ["src/basisfill/_gfcore.pyx"])],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
