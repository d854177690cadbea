# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled GF(p) elimination kernels.

Same interface as ``_gfcore_py``: rank / independence of a column
selection of a row-major ground matrix over GF(p), p prime. The inner
loops run on C integers; products of two entries fit in 64 bits since
p < 2**16.
"""

from libc.stdlib cimport free, malloc


cdef inline long long _inv_mod(long long a, long long p):
    # Fermat inverse a**(p-2) mod p; p prime, a != 0 mod p.
    cdef long long result = 1
    cdef long long base = a % p
    cdef long long e = p - 2
    while e:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


cdef int _eliminate(const int[::1] flat, int n_rows, int n_cols, cols,
                    int p, bint early_exit) except -1:
    """Shared elimination; returns the rank, or -(1) via exception paths.

    With ``early_exit`` the caller only needs to know whether every
    column produced a pivot; a pivotless column returns immediately
    with the rank found so far (necessarily < len(cols))."""
    cdef Py_ssize_t m = len(cols)
    if m == 0:
        return 0
    cdef long long pp = p
    cdef long long *work = <long long *> malloc(n_rows * m * sizeof(long long))
    cdef int *csel = <int *> malloc(m * sizeof(int))
    if work == NULL or csel == NULL:
        if work != NULL:
            free(work)
        if csel != NULL:
            free(csel)
        raise MemoryError()
    cdef Py_ssize_t k, j
    cdef int r, rank, pivot
    cdef long long inv, factor, tmp
    try:
        for k in range(m):
            csel[k] = cols[k]
        for r in range(n_rows):
            for k in range(m):
                work[r * m + k] = flat[r * n_cols + csel[k]] % pp
        rank = 0
        for k in range(m):
            pivot = -1
            for r in range(rank, n_rows):
                if work[r * m + k] != 0:
                    pivot = r
                    break
            if pivot < 0:
                if early_exit:
                    return rank
                continue
            if pivot != rank:
                for j in range(k, m):
                    tmp = work[rank * m + j]
                    work[rank * m + j] = work[pivot * m + j]
                    work[pivot * m + j] = tmp
            inv = _inv_mod(work[rank * m + k], pp)
            for j in range(k, m):
                work[rank * m + j] = work[rank * m + j] * inv % pp
            for r in range(rank + 1, n_rows):
                factor = work[r * m + k]
                if factor:
                    for j in range(k, m):
                        work[r * m + j] = (work[r * m + j]
                                           - factor * work[rank * m + j]) % pp
                        if work[r * m + j] < 0:
                            work[r * m + j] += pp
            rank += 1
            if rank == n_rows:
                break
        return rank
    finally:
        free(work)
        free(csel)


def gf_rank_columns(const int[::1] flat, int n_rows, int n_cols, cols, int p):
    """Rank over GF(p) of the submatrix formed by the given columns."""
    return _eliminate(flat, n_rows, n_cols, cols, p, False)


def gf_columns_independent(const int[::1] flat, int n_rows, int n_cols, cols, int p):
    """True iff the selected columns are linearly independent over GF(p)."""
    cdef Py_ssize_t m = len(cols)
    if m > n_rows:
        return False
    return _eliminate(flat, n_rows, n_cols, cols, p, True) == m
