"""The mutable fill table and its validated atomic moves.

A table state over an instance is *valid* when:

  V1  every filled cell (i, j) holds an element of that cell's basis;
  V2  every row entry set is independent;
  V3  every column entry set is independent;
  V4  the derived row/column sets and fill count agree with the cells
      (in particular no element appears twice in a row or in a column);
  V5  replaying the move log from an empty table reproduces the cells.

``commit`` is transactional: it applies a move's cell edits, revalidates
every touched row and column, and rolls the edits back if anything is
violated, raising ``RejectedMove`` with the failed condition and
coordinates. Since an empty table is valid and commits preserve
validity, any table built through commits satisfies V1-V4 at all times.

Move variants:

  PlaceDirect(row, col, elem)      fill an empty cell; fill count +1.
  SimpleSwap(row, fill_col, drain_col, witness, place=None)
      relocate the row's empty cell: fill (row, fill_col) with the
      witness and empty (row, drain_col), optionally refilling
      (row, drain_col) with ``place`` (then fill count +1, else +0).
  RemovalStep(row, fill_col, drain_col, elem, witness, drain_row)
      the cascade step: fill the row as in a simple swap, place ``elem``
      at (row, drain_col), and empty (drain_row, drain_col); fill count
      net +0. With ``witness=None`` the cell (row, drain_col) must have
      been empty and (row, fill_col) is left untouched.
  Transfer(steps)                  an all-or-nothing batch of removal steps.

Row/column memberships are tracked as count maps so that a rolled-back
edit always restores them exactly, even when the rejected intermediate
state transiently repeated an element.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .errors import InputError, RejectedMove
from .instance import Instance
from .matroid import element_set


@dataclass(frozen=True)
class PlaceDirect:
    row: int
    col: int
    elem: int

    def to_record(self) -> dict:
        return {"kind": "place", "row": self.row, "col": self.col, "elem": self.elem}


@dataclass(frozen=True)
class SimpleSwap:
    row: int
    fill_col: int
    drain_col: int
    witness: int
    place: Optional[int] = None

    def to_record(self) -> dict:
        return {
            "kind": "swap",
            "row": self.row,
            "fill_col": self.fill_col,
            "drain_col": self.drain_col,
            "witness": self.witness,
            "place": self.place,
        }


@dataclass(frozen=True)
class RemovalStep:
    row: int
    fill_col: int
    drain_col: int
    elem: int
    witness: Optional[int]
    drain_row: int

    def to_record(self) -> dict:
        return {
            "kind": "removal",
            "row": self.row,
            "fill_col": self.fill_col,
            "drain_col": self.drain_col,
            "elem": self.elem,
            "witness": self.witness,
            "drain_row": self.drain_row,
        }


@dataclass(frozen=True)
class Transfer:
    steps: tuple[RemovalStep, ...]

    def to_record(self) -> dict:
        return {"kind": "transfer", "steps": [s.to_record() for s in self.steps]}


Move = Union[PlaceDirect, SimpleSwap, RemovalStep, Transfer]


def move_from_record(rec: dict) -> Move:
    kind = rec.get("kind")
    if kind == "place":
        return PlaceDirect(rec["row"], rec["col"], rec["elem"])
    if kind == "swap":
        return SimpleSwap(
            rec["row"], rec["fill_col"], rec["drain_col"], rec["witness"], rec["place"]
        )
    if kind == "removal":
        return RemovalStep(
            rec["row"],
            rec["fill_col"],
            rec["drain_col"],
            rec["elem"],
            rec["witness"],
            rec["drain_row"],
        )
    if kind == "transfer":
        return Transfer(tuple(move_from_record(s) for s in rec["steps"]))
    raise InputError(f"unknown move kind {kind!r}")


class Table:
    """Partially filled f x n table confined to one thread of execution."""

    def __init__(self, instance: Instance):
        self.instance = instance
        self.cells: list[list[Optional[int]]] = [
            [None] * instance.n for _ in range(instance.f)
        ]
        self._row_counts: list[dict[int, int]] = [{} for _ in range(instance.f)]
        self._col_counts: list[dict[int, int]] = [{} for _ in range(instance.n)]
        self.filled = 0
        self.log: list[Move] = []

    def copy(self) -> "Table":
        dup = Table.__new__(Table)
        dup.instance = self.instance
        dup.cells = [row[:] for row in self.cells]
        dup._row_counts = [dict(c) for c in self._row_counts]
        dup._col_counts = [dict(c) for c in self._col_counts]
        dup.filled = self.filled
        dup.log = list(self.log)
        return dup

    @classmethod
    def from_cells(
        cls,
        instance: Instance,
        cells: list[list[Optional[int]]],
        log: list[Move],
    ) -> "Table":
        """Reconstruct a snapshot without validation, for auditing only.

        Deserialized tables may violate any invariant; ``verify`` is the
        judge. Live mutation still goes through ``commit`` exclusively.
        """
        table = cls(instance)
        for i, row in enumerate(cells):
            for j, x in enumerate(row):
                if x is None:
                    continue
                table.cells[i][j] = x
                cls._bump(table._row_counts[i], x, +1)
                cls._bump(table._col_counts[j], x, +1)
                table.filled += 1
        table.log = list(log)
        return table

    def row_set(self, i: int):
        """Current entries of row i (keys view; committed states never repeat)."""
        return self._row_counts[i].keys()

    def col_set(self, j: int):
        return self._col_counts[j].keys()

    def row_tuple(self, i: int):
        return element_set(self._row_counts[i])

    def col_tuple(self, j: int):
        return element_set(self._col_counts[j])

    def row_size(self, i: int) -> int:
        return len(self._row_counts[i])

    def col_size(self, j: int) -> int:
        return len(self._col_counts[j])

    def full_rows(self) -> tuple[int, ...]:
        n = self.instance.n
        return tuple(
            i for i in range(self.instance.f) if len(self._row_counts[i]) == n
        )

    def missing_count(self, i: int) -> int:
        return self.instance.n - len(self._row_counts[i])

    def empty_cols(self, i: int) -> tuple[int, ...]:
        return tuple(j for j in range(self.instance.n) if self.cells[i][j] is None)

    def values(self) -> set[int]:
        """Every element currently placed anywhere in the table."""
        out: set[int] = set()
        for counts in self._row_counts:
            out.update(counts)
        return out

    # -- commit machinery ---------------------------------------------------

    def _check_coords(self, i: int, j: int) -> None:
        if not (0 <= i < self.instance.f and 0 <= j < self.instance.n):
            raise InputError(f"cell ({i},{j}) out of range")

    def _plan(self, move: Move) -> list[tuple[int, int, Optional[int]]]:
        """Turn a move into (row, col, new_value) edits, checking shape
        preconditions (emptiness/filledness) against the current cells."""
        edits: list[tuple[int, int, Optional[int]]] = []
        if isinstance(move, PlaceDirect):
            self._check_coords(move.row, move.col)
            if self.cells[move.row][move.col] is not None:
                raise RejectedMove(
                    "occupied", f"cell ({move.row},{move.col}) is filled"
                )
            edits.append((move.row, move.col, move.elem))
        elif isinstance(move, SimpleSwap):
            self._check_coords(move.row, move.fill_col)
            self._check_coords(move.row, move.drain_col)
            if move.fill_col == move.drain_col:
                raise RejectedMove("coords", "swap columns must differ")
            if self.cells[move.row][move.fill_col] is not None:
                raise RejectedMove(
                    "occupied", f"cell ({move.row},{move.fill_col}) is filled"
                )
            if self.cells[move.row][move.drain_col] is None:
                raise RejectedMove(
                    "vacant", f"cell ({move.row},{move.drain_col}) is empty"
                )
            edits.append((move.row, move.fill_col, move.witness))
            edits.append((move.row, move.drain_col, move.place))
        elif isinstance(move, RemovalStep):
            self._check_coords(move.row, move.drain_col)
            self._check_coords(move.drain_row, move.drain_col)
            if move.drain_row == move.row:
                raise RejectedMove("coords", "removal row must differ from fill row")
            if self.cells[move.drain_row][move.drain_col] is None:
                raise RejectedMove(
                    "vacant", f"cell ({move.drain_row},{move.drain_col}) is empty"
                )
            if move.witness is None:
                if self.cells[move.row][move.drain_col] is not None:
                    raise RejectedMove(
                        "occupied", f"cell ({move.row},{move.drain_col}) is filled"
                    )
            else:
                self._check_coords(move.row, move.fill_col)
                if move.fill_col == move.drain_col:
                    raise RejectedMove("coords", "removal columns must differ")
                if self.cells[move.row][move.fill_col] is not None:
                    raise RejectedMove(
                        "occupied", f"cell ({move.row},{move.fill_col}) is filled"
                    )
                if self.cells[move.row][move.drain_col] is None:
                    raise RejectedMove(
                        "vacant", f"cell ({move.row},{move.drain_col}) is empty"
                    )
                edits.append((move.row, move.fill_col, move.witness))
            edits.append((move.row, move.drain_col, move.elem))
            edits.append((move.drain_row, move.drain_col, None))
        else:
            raise InputError(f"cannot plan move of type {type(move).__name__}")
        return edits

    def _apply(self, edits) -> list[tuple[int, int, Optional[int]]]:
        undo = []
        for i, j, new in edits:
            old = self.cells[i][j]
            undo.append((i, j, old))
            if old is not None:
                self._bump(self._row_counts[i], old, -1)
                self._bump(self._col_counts[j], old, -1)
                self.filled -= 1
            self.cells[i][j] = new
            if new is not None:
                self._bump(self._row_counts[i], new, +1)
                self._bump(self._col_counts[j], new, +1)
                self.filled += 1
        return undo

    @staticmethod
    def _bump(counts: dict[int, int], elem: int, delta: int) -> None:
        c = counts.get(elem, 0) + delta
        if c:
            counts[elem] = c
        else:
            counts.pop(elem, None)

    def _rollback(self, undo) -> None:
        self._apply(list(reversed(undo)))

    def _validate_touched(self, edits) -> Optional[tuple[str, str]]:
        oracle = self.instance.matroid
        bases = self.instance.bases
        for i, j, new in edits:
            if new is not None and new not in bases[i][j]:
                return ("V1", f"element {new} not in the basis of cell ({i},{j})")
        for i in sorted({i for i, _, _ in edits}):
            counts = self._row_counts[i]
            if any(c > 1 for c in counts.values()):
                return ("V4", f"duplicate element in row {i}")
            if not oracle.is_independent(counts):
                return ("V2", f"row {i} entry set is dependent")
        for j in sorted({j for _, j, _ in edits}):
            counts = self._col_counts[j]
            if any(c > 1 for c in counts.values()):
                return ("V4", f"duplicate element in column {j}")
            if not oracle.is_independent(counts):
                return ("V3", f"column {j} entry set is dependent")
        return None

    def commit(self, move: Move) -> None:
        """Apply a move transactionally; on violation the table is unchanged."""
        if isinstance(move, Transfer):
            done: list[list[tuple[int, int, Optional[int]]]] = []
            try:
                for step in move.steps:
                    edits = self._plan(step)
                    undo = self._apply(edits)
                    done.append(undo)
                    failure = self._validate_touched(edits)
                    if failure:
                        raise RejectedMove(*failure)
            except RejectedMove:
                for undo in reversed(done):
                    self._rollback(undo)
                raise
            self.log.append(move)
            return
        edits = self._plan(move)
        undo = self._apply(edits)
        failure = self._validate_touched(edits)
        if failure:
            self._rollback(undo)
            raise RejectedMove(*failure)
        self.log.append(move)

    def admits(self, move: Move) -> bool:
        """True when the move would commit; leaves the table unchanged."""
        if isinstance(move, Transfer):
            probe = self.copy()
            try:
                probe.commit(move)
            except (RejectedMove, InputError):
                return False
            return True
        try:
            edits = self._plan(move)
        except (RejectedMove, InputError):
            return False
        undo = self._apply(edits)
        failure = self._validate_touched(edits)
        self._rollback(undo)
        return failure is None


# ---------------------------------------------------------------------------
# Verification


@dataclass
class VerifyReport:
    checks: dict[str, bool]
    failures: list[tuple[str, str]] = field(default_factory=list)
    filled: int = 0
    full_row_count: int = 0
    target_full_rows: int = 0

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_data(self) -> dict:
        return {
            "ok": self.ok,
            "checks": self.checks,
            "failures": [list(f) for f in self.failures],
            "filled": self.filled,
            "full_rows": self.full_row_count,
            "target_full_rows": self.target_full_rows,
        }


def verify(instance: Instance, table: Table) -> VerifyReport:
    """Full check of V1-V5 with first-counterexample reporting."""
    oracle = instance.matroid
    checks = {f"V{k}": True for k in range(1, 6)}
    failures: list[tuple[str, str]] = []

    def fail(name: str, detail: str) -> None:
        if checks[name]:
            checks[name] = False
            failures.append((name, detail))

    for i in range(instance.f):
        for j in range(instance.n):
            x = table.cells[i][j]
            if x is not None and x not in instance.bases[i][j]:
                fail("V1", f"cell ({i},{j}) holds foreign element {x}")
    for i in range(instance.f):
        values = [x for x in table.cells[i] if x is not None]
        if len(set(values)) != len(values):
            fail("V4", f"row {i} repeats an element")
        elif not oracle.is_independent(values):
            fail("V2", f"row {i} entry set is dependent")
    for j in range(instance.n):
        values = [table.cells[i][j] for i in range(instance.f)]
        values = [x for x in values if x is not None]
        if len(set(values)) != len(values):
            fail("V4", f"column {j} repeats an element")
        elif not oracle.is_independent(values):
            fail("V3", f"column {j} entry set is dependent")
    derived_filled = sum(1 for row in table.cells for x in row if x is not None)
    if table.filled != derived_filled:
        fail("V4", f"fill count {table.filled} != {derived_filled} filled cells")
    for i in range(instance.f):
        if set(x for x in table.cells[i] if x is not None) != set(table.row_set(i)):
            fail("V4", f"row set {i} out of sync with cells")
    for j in range(instance.n):
        col = {table.cells[i][j] for i in range(instance.f)} - {None}
        if col != set(table.col_set(j)):
            fail("V4", f"column set {j} out of sync with cells")

    replay = Table(instance)
    try:
        for move in table.log:
            replay.commit(move)
        if replay.cells != table.cells:
            fail("V5", "replaying the log does not reproduce the cells")
    except (RejectedMove, InputError) as exc:
        fail("V5", f"log replay rejected a move: {exc}")

    return VerifyReport(
        checks=checks,
        failures=failures,
        filled=derived_filled,
        full_row_count=len(table.full_rows()),
        target_full_rows=instance.target_full_rows,
    )
