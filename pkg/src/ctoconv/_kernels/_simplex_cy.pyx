# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled simplex pivot kernel for float64 tableaus.

Mirrors _simplex_py.run_simplex exactly (same layout, same Bland rule) but
typed: double[:, ::1] tableau and int64 basis.
"""

OPTIMAL = 0
UNBOUNDED = 1
ITERATION_LIMIT = 2


def run_simplex(double[:, ::1] tab, long[:] basis, double eps, long max_iter):
    cdef Py_ssize_t m = basis.shape[0]
    cdef Py_ssize_t ncols = tab.shape[1]
    cdef Py_ssize_t rhs = ncols - 1
    cdef Py_ssize_t i, j, enter, leave
    cdef long it
    cdef double a, ratio, best, piv, factor
    # Wider pivot-acceptance margin than the comparison tolerance; see the
    # note in _simplex_py.run_simplex.
    cdef double piv_tol = eps * 100

    for it in range(max_iter):
        enter = -1
        for j in range(rhs):
            if tab[m, j] < -eps:
                enter = j
                break
        if enter < 0:
            return OPTIMAL
        leave = -1
        best = 0.0
        for i in range(m):
            a = tab[i, enter]
            if a > piv_tol:
                ratio = tab[i, rhs] / a
                if leave < 0 or ratio < best or (
                    ratio == best and basis[i] < basis[leave]
                ):
                    best = ratio
                    leave = i
        if leave < 0:
            return UNBOUNDED

        piv = tab[leave, enter]
        if piv != 1.0:
            for j in range(ncols):
                tab[leave, j] /= piv
        for i in range(m + 1):
            if i == leave:
                continue
            factor = tab[i, enter]
            if factor != 0.0:
                for j in range(ncols):
                    tab[i, j] -= factor * tab[leave, j]
                tab[i, enter] = 0.0
        basis[leave] = enter
    return ITERATION_LIMIT
