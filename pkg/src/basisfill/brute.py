"""Exact backtracking solvers for desk-scale ground truth.

``brute_max_rows`` assigns one representative per cell, row-major,
keeping every column an independent set of distinct elements, and
maximizes the number of rows whose entries form a basis. Any table the
heuristic solver produces induces such an assignment (fill the remaining
cells column-consistently, which is always possible while columns hold
fewer than n entries), so the optimum here dominates the solver's
full-row count.

``brute_kahn_full`` searches a square grid (f == n) for an assignment
where every row and every column is a basis, i.e. a witness for the
full row-and-column conjecture on that instance.

Both searches count node expansions against a guard rather than trying
to size the tree a priori; overlapping bases make static estimates
unreliable.
"""

from __future__ import annotations

from typing import Optional

from .errors import InputError, SearchBudgetExceeded
from .instance import Instance

DEFAULT_GUARD = 10_000_000


class _NodeBudget:
    __slots__ = ("left",)

    def __init__(self, guard: int):
        self.left = guard

    def spend(self) -> None:
        self.left -= 1
        if self.left < 0:
            raise SearchBudgetExceeded("node guard exceeded")


def brute_max_rows(
    instance: Instance, guard: int = DEFAULT_GUARD
) -> tuple[int, list[list[int]]]:
    """Maximum number of basis rows over all column-independent assignments.

    Returns the optimum and one witness grid. Requires f <= n so that
    full columns can stay independent at all.
    """
    inst = instance
    n, f = inst.n, inst.f
    if f > n:
        raise InputError("brute_max_rows requires f <= n")
    oracle = inst.matroid
    budget = _NodeBudget(guard)
    cells: list[list[Optional[int]]] = [[None] * n for _ in range(f)]
    col_sets: list[set[int]] = [set() for _ in range(n)]
    best = -1
    best_grid: list[list[int]] = []

    def descend(pos: int, full_rows: int, row_set: set[int], row_ok: bool) -> None:
        nonlocal best, best_grid
        if pos == f * n:
            if full_rows > best:
                best = full_rows
                best_grid = [list(r) for r in cells]  # type: ignore[arg-type]
            return
        i, j = divmod(pos, n)
        # Finished full rows plus everything from row i onward, minus the
        # current row when it is already broken.
        bound = full_rows + (f - i) - (0 if row_ok else 1)
        if bound <= best:
            return
        for x in inst.bases[i][j]:
            budget.spend()
            if x in col_sets[j] or not oracle.is_independent(col_sets[j] | {x}):
                continue
            cells[i][j] = x
            col_sets[j].add(x)
            ok = row_ok and x not in row_set and oracle.is_independent(row_set | {x})
            if j == n - 1:
                descend(pos + 1, full_rows + (1 if ok else 0), set(), True)
            else:
                descend(pos + 1, full_rows, row_set | {x}, ok)
            col_sets[j].discard(x)
            cells[i][j] = None

    descend(0, 0, set(), True)
    return best, best_grid


def brute_kahn_full(
    instance: Instance, guard: int = DEFAULT_GUARD
) -> Optional[list[list[int]]]:
    """Assignment with every row and every column a basis, or None.

    Only meaningful on square instances (f == n).
    """
    inst = instance
    n, f = inst.n, inst.f
    if f != n:
        raise InputError("brute_kahn_full requires a square instance (f == n)")
    oracle = inst.matroid
    budget = _NodeBudget(guard)
    cells: list[list[Optional[int]]] = [[None] * n for _ in range(f)]
    col_sets: list[set[int]] = [set() for _ in range(n)]

    def descend(pos: int, row_set: set[int]) -> Optional[list[list[int]]]:
        if pos == f * n:
            return [list(r) for r in cells]  # type: ignore[arg-type]
        i, j = divmod(pos, n)
        for x in inst.bases[i][j]:
            budget.spend()
            if x in row_set or x in col_sets[j]:
                continue
            if not oracle.is_independent(row_set | {x}):
                continue
            if not oracle.is_independent(col_sets[j] | {x}):
                continue
            cells[i][j] = x
            col_sets[j].add(x)
            nxt = set() if j == n - 1 else row_set | {x}
            found = descend(pos + 1, nxt)
            if found is not None:
                return found
            col_sets[j].discard(x)
            cells[i][j] = None
        return None

    return descend(0, set())
