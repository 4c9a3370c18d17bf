"""Simplex kernel selection: compiled extension when available, else Python.

Set CTOCONV_PURE_PYTHON=1 to force the pure-Python kernel (used by the
benchmark and as an escape hatch).  Exact (Fraction) solves always use the
Python kernel, which is generic over the entry type.
"""

import os

from . import _simplex_py

OPTIMAL = _simplex_py.OPTIMAL
UNBOUNDED = _simplex_py.UNBOUNDED
ITERATION_LIMIT = _simplex_py.ITERATION_LIMIT

run_simplex_exact = _simplex_py.run_simplex

if os.environ.get("CTOCONV_PURE_PYTHON"):
    run_simplex_float = _simplex_py.run_simplex
    KERNEL = "python"
else:
    try:
        from . import _simplex_cy

        run_simplex_float = _simplex_cy.run_simplex
        KERNEL = "cython"
    except ImportError:  # extension not built; fall back silently
        run_simplex_float = _simplex_py.run_simplex
        KERNEL = "python"
