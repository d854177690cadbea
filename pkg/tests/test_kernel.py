"""Parity and correctness of the elimination kernel pair."""

from array import array

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from basisfill import _gfcore_py, kernel

try:
    from basisfill import _gfcore

    HAVE_EXT = True
except ImportError:
    HAVE_EXT = False

PRIMES = [2, 3, 5, 7, 65521]


def _flat(rows):
    return array("i", [x for row in rows for x in row])


def test_identity_full_rank():
    rows = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert kernel.gf_rank_columns(_flat(rows), 3, 3, [0, 1, 2], 2) == 3
    assert kernel.gf_columns_independent(_flat(rows), 3, 3, [0, 1, 2], 2)


def test_dependent_columns():
    # (1,0), (0,1), (1,1) over GF(2): rank 2 of 3
    rows = [[1, 0, 1], [0, 1, 1]]
    assert kernel.gf_rank_columns(_flat(rows), 2, 3, [0, 1, 2], 2) == 2
    assert not kernel.gf_columns_independent(_flat(rows), 2, 3, [0, 1, 2], 2)
    assert kernel.gf_columns_independent(_flat(rows), 2, 3, [0, 2], 2)


def test_empty_selection():
    rows = [[1, 0], [0, 1]]
    assert kernel.gf_rank_columns(_flat(rows), 2, 2, [], 5) == 0
    assert kernel.gf_columns_independent(_flat(rows), 2, 2, [], 5)


def test_more_columns_than_rows_dependent():
    rows = [[1, 2, 3]]
    assert not kernel.gf_columns_independent(_flat(rows), 1, 3, [0, 1, 2], 5)


def test_large_prime_arithmetic():
    p = 65521
    # Columns (1, 0), (p-1, 1): invertible since determinant is 1.
    rows = [[1, p - 1], [0, 1]]
    assert kernel.gf_rank_columns(_flat(rows), 2, 2, [0, 1], p) == 2


@pytest.mark.skipif(not HAVE_EXT, reason="compiled kernel not built")
@settings(max_examples=200, deadline=None)
@given(st.data())
def test_compiled_matches_pure(data):
    p = data.draw(st.sampled_from(PRIMES))
    n_rows = data.draw(st.integers(1, 6))
    n_cols = data.draw(st.integers(1, 8))
    rows = data.draw(
        st.lists(
            st.lists(st.integers(0, p - 1), min_size=n_cols, max_size=n_cols),
            min_size=n_rows,
            max_size=n_rows,
        )
    )
    cols = data.draw(
        st.lists(st.integers(0, n_cols - 1), unique=True, max_size=n_cols)
    )
    flat = _flat(rows)
    assert _gfcore.gf_rank_columns(flat, n_rows, n_cols, cols, p) == (
        _gfcore_py.gf_rank_columns(flat, n_rows, n_cols, cols, p)
    )
    assert _gfcore.gf_columns_independent(flat, n_rows, n_cols, cols, p) == (
        _gfcore_py.gf_columns_independent(flat, n_rows, n_cols, cols, p)
    )


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_rank_matches_subset_enumeration(data):
    """Rank equals the largest independent column subset, brute-forced."""
    from itertools import combinations

    p = data.draw(st.sampled_from([2, 3]))
    n_rows = data.draw(st.integers(1, 3))
    n_cols = data.draw(st.integers(1, 5))
    rows = data.draw(
        st.lists(
            st.lists(st.integers(0, p - 1), min_size=n_cols, max_size=n_cols),
            min_size=n_rows,
            max_size=n_rows,
        )
    )
    flat = _flat(rows)
    cols = list(range(n_cols))
    expected = 0
    for size in range(min(n_rows, n_cols), 0, -1):
        if any(
            kernel.gf_columns_independent(flat, n_rows, n_cols, sub, p)
            for sub in combinations(cols, size)
        ):
            expected = size
            break
    assert kernel.gf_rank_columns(flat, n_rows, n_cols, cols, p) == expected
