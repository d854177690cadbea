"""Shared fixtures and independent reference implementations.

The reference scans re-derive swap/removal semantics directly from the
definitions with plain nested loops over (column, element, witness,
position); they deliberately share no code with ``basisfill.swaps``.
"""

from __future__ import annotations

import random
from array import array
from fractions import Fraction

from basisfill.instance import Instance, _GroundBuilder
from basisfill.kernel import gf_columns_independent
from basisfill.matroid import LinearOracle, element_set
from basisfill.table import PlaceDirect, Table

# GF(2)^3 ground set: e1 e2 e3 e12 e13 e23 e123
VEC3 = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (1, 0, 1), (0, 1, 1), (1, 1, 1)]
E1, E2, E3, E12, E13, E23, E123 = range(7)


def crafted_stuck3():
    """Two-row GF(2)^3 instance whose cell (1,0) is truly stuck.

    Row 0 holds the standard basis; row 1 holds shifted elements and its
    empty cell's basis consists entirely of blocked elements. No direct
    add or fill-count increase exists at (1,0); the two removable
    positions (0,1) and (0,2) are the only way forward.
    """
    oracle = LinearOracle(2, VEC3)
    std = (E1, E2, E3)
    bases = (
        (std, std, std),
        ((E1, E12, E13), (E2, E12, E23), (E3, E13, E23)),
    )
    inst = Instance(oracle, 3, 2, Fraction(1, 5), bases)
    inst.validate()
    table = Table(inst)
    for i, j, x in [(0, 0, E1), (0, 1, E2), (0, 2, E3), (1, 1, E12), (1, 2, E13)]:
        table.commit(PlaceDirect(i, j, x))
    return inst, table


# GF(2)^4 ground set for the out-star scenario
VEC4 = [
    (1, 0, 0, 0),  # e1
    (0, 1, 0, 0),  # e2
    (0, 0, 1, 0),  # e3
    (0, 0, 0, 1),  # e4
    (1, 1, 0, 0),  # e12
    (1, 0, 1, 0),  # e13
    (1, 0, 0, 1),  # e14
    (0, 1, 1, 0),  # e23
    (0, 1, 0, 1),  # e24
]
F1, F2, F3, F4, F12, F13, F14, F23, F24 = range(9)


def crafted_star4():
    """Three-row GF(2)^4 instance: full centre row 0, leaf rows 1 and 2
    each missing their own column with two removable positions in row 0.

    Designed so the out-star (centre 0, leaves {1, 2}) at level 1 is
    applicable: the transfers move e3 and e4 out of row 0.
    """
    oracle = LinearOracle(2, VEC4)
    std = (F1, F2, F3, F4)
    row1 = {0: (F1, F12, F13, F14), 1: (F2, F12, F13, F14),
            2: (F3, F12, F13, F14), 3: (F4, F12, F13, F14)}
    row2 = {0: (F1, F12, F23, F24), 1: (F2, F12, F23, F24),
            2: (F3, F12, F23, F24), 3: (F4, F12, F23, F24)}
    bases = (
        (std, std, std, std),
        tuple(element_set(row1[j]) for j in range(4)),
        tuple(element_set(row2[j]) for j in range(4)),
    )
    inst = Instance(oracle, 4, 3, Fraction(1, 5), bases)
    inst.validate()
    table = Table(inst)
    fills = [
        (0, 0, F1), (0, 1, F2), (0, 2, F3), (0, 3, F4),
        (1, 1, F12), (1, 2, F13), (1, 3, F14),  # row 1 misses column 0
        (2, 0, F12), (2, 2, F23), (2, 3, F24),  # row 2 misses column 1
    ]
    for i, j, x in fills:
        table.commit(PlaceDirect(i, j, x))
    return inst, table


def gen_pool(p, n, f, seed, pool_size, epsilon=Fraction(1, 5)):
    """Adversarial grid tiled from a small pool of bases (heavy overlap)."""
    rng = random.Random(seed)
    ground = _GroundBuilder()
    pool = []
    for _ in range(pool_size):
        while True:
            cols = [tuple(rng.randrange(p) for _ in range(n)) for _ in range(n)]
            flat = array("i", [cols[c][r] for r in range(n) for c in range(n)])
            if gf_columns_independent(flat, n, n, range(n), p):
                break
        pool.append(element_set(ground.get(v) for v in cols))
    bases = tuple(
        tuple(pool[(i * n + j) % pool_size] for j in range(n)) for i in range(f)
    )
    matroid = LinearOracle(p, ground.payloads)
    inst = Instance(matroid, n, f, epsilon, bases)
    inst.validate()
    return inst


def fill_greedy(table, limit=None):
    """Commit direct adds in scan order until none remain (or ``limit``)."""
    from basisfill.swaps import direct_add

    committed = 0
    progress = True
    while progress:
        progress = False
        for i in range(table.instance.f):
            for j in range(table.instance.n):
                if table.cells[i][j] is not None:
                    continue
                mv = direct_add(table, i, j)
                if mv is not None:
                    table.commit(mv)
                    committed += 1
                    progress = True
                    if limit is not None and committed >= limit:
                        return committed
    return committed


# ---------------------------------------------------------------------------
# Reference (definition-following) scans


def ref_subset_rank(oracle, elems):
    """Rank as the size of the largest independent subset, by enumeration."""
    from itertools import combinations

    elems = sorted(set(elems))
    for size in range(len(elems), 0, -1):
        for sub in combinations(elems, size):
            if oracle.is_independent(sub):
                return size
    return 0


def ref_direct_add(table, row, col):
    oracle = table.instance.matroid
    row_vals = set(table.row_set(row))
    col_vals = set(table.col_set(col))
    for x in table.instance.bases[row][col]:
        if x in row_vals or x in col_vals:
            continue
        if oracle.is_independent(row_vals | {x}) and oracle.is_independent(
            col_vals | {x}
        ):
            return x
    return None


def _ref_witnesses(table, row, target_col):
    oracle = table.instance.matroid
    col_vals = set(table.col_set(target_col))
    out = []
    for y in table.instance.bases[row][target_col]:
        if y in col_vals:
            continue
        if oracle.is_independent(col_vals | {y}):
            out.append(y)
    return out


def ref_swappable(table, row, target_col):
    """(column, witness) pairs by definition: drain a filled column while
    the target column and the row stay independent."""
    oracle = table.instance.matroid
    row_vals = set(table.row_set(row))
    pairs = []
    for c in range(table.instance.n):
        occ = table.cells[row][c]
        if occ is None or c == target_col:
            continue
        for y in _ref_witnesses(table, row, target_col):
            if y != occ and y in row_vals:
                continue
            if oracle.is_independent((row_vals - {occ}) | {y}):
                pairs.append((c, y))
                break
    return pairs


def ref_removal_scan(table, row, target_col):
    """(positions, opportunity keys) by quadruple (c, x, y, j) enumeration."""
    inst = table.instance
    oracle = inst.matroid
    row_vals = set(table.row_set(row))
    positions = set()
    opportunities = set()
    for c in range(inst.n):
        occ = table.cells[row][c]
        col_vals = set(table.col_set(c))
        if occ is None:
            for x in inst.bases[row][c]:
                if x in row_vals or x in col_vals:
                    continue
                if oracle.is_independent(row_vals | {x}) and oracle.is_independent(
                    col_vals | {x}
                ):
                    opportunities.add(("place", c, x))
            continue
        reduced = row_vals - {occ}
        for x in inst.bases[row][c]:
            if x == occ or x in reduced:
                continue
            witness = None
            for y in _ref_witnesses(table, row, target_col):
                if y != occ and y in reduced:
                    continue
                if y == x:
                    continue
                cand = reduced | {y, x}
                if len(cand) == len(reduced) + 2 and oracle.is_independent(cand):
                    witness = y
                    break
            if witness is None:
                continue
            col_after = col_vals - {occ}
            if x in col_after:
                for j in range(inst.f):
                    if j != row and table.cells[j][c] == x:
                        positions.add((j, c))
                continue
            if oracle.is_independent(col_after | {x}):
                opportunities.add(("swap", c, x))
                continue
            for j in range(inst.f):
                if j == row:
                    continue
                removed = table.cells[j][c]
                if removed is None:
                    continue
                if oracle.is_independent((col_after - {removed}) | {x}):
                    positions.add((j, c))
    return positions, opportunities
