"""Build script: compiles the optional Cython kernel extension.

Set NJCONST_NO_EXT=1 to skip the extension and install the pure-Python
package; njconst falls back to its numpy kernels at import time.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("NJCONST_NO_EXT") != "1":
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("njconst._kernels", ["src/njconst/_kernels.pyx"])],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=ext_modules)
