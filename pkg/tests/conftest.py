"""Shared fixtures and independent oracles for the test suite.

The Lorenz oracle below never sorts: it evaluates the hockey-stick
representation L[w](s) = min over thresholds c of (c*s + sum_i max(w_i -
c*g_i, 0)), which equals the sorted-cumulative construction for every
(sub-)normalized w.  The LP oracle delegates to scipy's HiGHS solver.
Both are independent of the library's own code paths.
"""

from fractions import Fraction

import pytest

from ctoconv import NumericPolicy, GibbsContext


RATIONAL = NumericPolicy(mode="rational")
FLOATS = NumericPolicy()

F = Fraction


def lorenz_oracle(w, g, s):
    """Hockey-stick evaluation of the Lorenz curve; exact on Fractions."""
    candidates = [0 * s] + [wi / gi for wi, gi in zip(w, g)]
    best = None
    for c in candidates:
        val = c * s + sum(max(wi - c * gi, 0 * s) for wi, gi in zip(w, g))
        if best is None or val < best:
            best = val
    return best


def scipy_feasible(system):
    """Independent LP feasibility oracle (HiGHS via scipy)."""
    import numpy as np
    from scipy.optimize import linprog

    n = system.n_vars
    a_eq = [list(map(float, row)) for row, _ in system.eq] or None
    b_eq = [float(b) for _, b in system.eq] or None
    a_ub = [[-float(x) for x in row] for row, _ in system.ineq] or None
    b_ub = [-float(b) for _, b in system.ineq] or None
    res = linprog(
        np.zeros(n), A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq,
        bounds=[(0, None)] * n, method="highs",
    )
    if res.status == 0:
        return True
    if res.status == 2:
        return False
    raise RuntimeError(f"oracle solver status {res.status}")


@pytest.fixture
def rational():
    return RATIONAL


@pytest.fixture
def floats():
    return FLOATS


@pytest.fixture
def uniform2():
    """Uniform Gibbs weights in dimension 2, exact arithmetic."""
    return GibbsContext.from_weights((F(1, 2), F(1, 2)), RATIONAL)


@pytest.fixture
def skew2():
    """Gibbs weights (2/3, 1/3), exact arithmetic."""
    return GibbsContext.from_weights((F(2, 3), F(1, 3)), RATIONAL)
