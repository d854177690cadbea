"""Pure-Python GF(p) elimination kernels.

Reference implementation of the hot primitives behind every linear
independence query: given a row-major ground matrix (``n_rows`` x
``n_cols`` entries in ``flat``), compute the rank of a selection of
columns over the prime field GF(p) by schoolbook Gaussian elimination.
No floating point anywhere; all arithmetic is exact modular integer
arithmetic.

The compiled twin in ``_gfcore.pyx`` exposes the same two functions;
``basisfill.kernel`` picks one at import time.
"""

from __future__ import annotations

from typing import Sequence


def _gather(flat: Sequence[int], n_cols: int, rows: int, cols: Sequence[int], p: int):
    return [[flat[r * n_cols + c] % p for c in cols] for r in range(rows)]


def gf_rank_columns(
    flat: Sequence[int], n_rows: int, n_cols: int, cols: Sequence[int], p: int
) -> int:
    """Rank over GF(p) of the submatrix formed by the given columns."""
    m = len(cols)
    if m == 0:
        return 0
    work = _gather(flat, n_cols, n_rows, cols, p)
    rank = 0
    for k in range(m):
        pivot = -1
        for r in range(rank, n_rows):
            if work[r][k]:
                pivot = r
                break
        if pivot < 0:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        lead = work[rank]
        inv = pow(lead[k], p - 2, p)
        for j in range(k, m):
            lead[j] = lead[j] * inv % p
        for r in range(rank + 1, n_rows):
            factor = work[r][k]
            if factor:
                row = work[r]
                for j in range(k, m):
                    row[j] = (row[j] - factor * lead[j]) % p
        rank += 1
        if rank == n_rows:
            break
    return rank


def gf_columns_independent(
    flat: Sequence[int], n_rows: int, n_cols: int, cols: Sequence[int], p: int
) -> bool:
    """True iff the selected columns are linearly independent over GF(p).

    Same elimination as ``gf_rank_columns`` but bails out as soon as a
    column fails to produce a pivot.
    """
    m = len(cols)
    if m == 0:
        return True
    if m > n_rows:
        return False
    work = _gather(flat, n_cols, n_rows, cols, p)
    rank = 0
    for k in range(m):
        pivot = -1
        for r in range(rank, n_rows):
            if work[r][k]:
                pivot = r
                break
        if pivot < 0:
            return False
        work[rank], work[pivot] = work[pivot], work[rank]
        lead = work[rank]
        inv = pow(lead[k], p - 2, p)
        for j in range(k, m):
            lead[j] = lead[j] * inv % p
        for r in range(rank + 1, n_rows):
            factor = work[r][k]
            if factor:
                row = work[r]
                for j in range(k, m):
                    row[j] = (row[j] - factor * lead[j]) % p
        rank += 1
    return True
