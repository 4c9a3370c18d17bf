"""Build script: compiles the optional Cython simplex kernel.

The package is fully functional without the extension (a pure-Python kernel
is selected at import time), so a failed compile only costs speed.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/ctoconv/_kernels/_simplex_cy.pyx"],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
