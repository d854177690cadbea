"""Local progress search around an empty cell: direct adds, simple swaps,
addable elements, removable positions, and the row-to-basis matching.

All searches are exhaustive over their index ranges and deterministic:
candidates are scanned in ascending id order and the lowest valid witness
is retained. Everything here is read-only against a table snapshot.

Throughout, the empty cell under attack is (row, target_col); ``via_col``
ranges over source columns whose basis supplies candidate elements. An
element is only considered placeable when it does not already occur in
the receiving row or column, since committed tables never repeat an
element within a line.

Terminology for the escalating notions of progress at (row, target_col):

* a *direct add* places some element of the cell's own basis straight in;
* a column is *swappable* when the row's entry there can be relocated to
  (row, target_col) via a witness element, keeping row and column sets
  independent;
* an element of a source basis is *addable* when it can enter the row at
  the source column, possibly after such a swap;
* a filled position of another row is *removable* when some addable
  element can replace it in its column, freeing that position while the
  fill count stays constant.

Every surfaced record materializes into a move that the table accepts;
``audit_cell`` rechecks the counting guarantees these searches rely on
and is used by the solver's claim sweep.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import OracleViolationError
from .table import Move, PlaceDirect, RemovalStep, SimpleSwap, Table


@dataclass(frozen=True)
class SwapOption:
    """A swappable source column together with its lowest witness."""

    col: int
    witness: int


@dataclass(frozen=True)
class AddableRecord:
    row: int
    target_col: int
    via_col: int
    elem: int
    witness: Optional[int]
    displaced: Optional[int]


@dataclass(frozen=True)
class RemovableRecord:
    addable: AddableRecord
    drain_row: int
    removed_elem: int

    @property
    def position(self) -> tuple[int, int]:
        return (self.drain_row, self.addable.via_col)

    def as_move(self) -> RemovalStep:
        a = self.addable
        return RemovalStep(
            row=a.row,
            fill_col=a.target_col,
            drain_col=a.via_col,
            elem=a.elem,
            witness=a.witness,
            drain_row=self.drain_row,
        )


@dataclass
class AddableScan:
    records: list[AddableRecord] = field(default_factory=list)
    bonus_fills: list[PlaceDirect] = field(default_factory=list)


@dataclass
class RemovableScan:
    records: list[RemovableRecord] = field(default_factory=list)
    opportunities: list[Move] = field(default_factory=list)
    addable_by_col: dict[int, list[AddableRecord]] = field(default_factory=dict)

    def distinct_positions(self) -> set[tuple[int, int]]:
        return {rec.position for rec in self.records}

    def opportunity_cols(self) -> set[int]:
        out = set()
        for mv in self.opportunities:
            if isinstance(mv, PlaceDirect):
                out.add(mv.col)
            elif isinstance(mv, SimpleSwap):
                out.add(mv.drain_col)
        return out


def _can_join(oracle, members, x: int) -> bool:
    """x extends the entry set: not already present and still independent."""
    if x in members:
        return False
    return oracle.is_independent(tuple(members) + (x,))


def direct_add(table: Table, row: int, col: int) -> Optional[PlaceDirect]:
    """Lowest element of the cell's basis independent to its row and column."""
    assert table.cells[row][col] is None, "direct_add requires an empty cell"
    oracle = table.instance.matroid
    row_set = table.row_set(row)
    col_set = table.col_set(col)
    for x in table.instance.bases[row][col]:
        if _can_join(oracle, row_set, x) and _can_join(oracle, col_set, x):
            return PlaceDirect(row, col, x)
    return None


def _target_witnesses(table: Table, row: int, target_col: int) -> list[int]:
    """Elements of the target cell's basis that the target column accepts."""
    oracle = table.instance.matroid
    col_set = table.col_set(target_col)
    return [
        y
        for y in table.instance.bases[row][target_col]
        if _can_join(oracle, col_set, y)
    ]


def swappable_columns(table: Table, row: int, target_col: int) -> list[SwapOption]:
    """All filled columns whose entry can be relocated to the target cell."""
    assert table.cells[row][target_col] is None
    oracle = table.instance.matroid
    row_set = set(table.row_set(row))
    witnesses = _target_witnesses(table, row, target_col)
    options: list[SwapOption] = []
    for c in range(table.instance.n):
        displaced = table.cells[row][c]
        if displaced is None or c == target_col:
            continue
        reduced = row_set - {displaced}
        for y in witnesses:
            if y != displaced and y in reduced:
                continue
            if oracle.is_independent(reduced | {y}):
                options.append(SwapOption(c, y))
                break
    return options


def addable_elements(
    table: Table, row: int, target_col: int, via_col: int
) -> AddableScan:
    """Exhaustive addable-element scan for one source column.

    With the source cell empty this reduces to the two independence
    tests against the row and the source column. With the source cell
    filled, each candidate is tried against every acceptable witness in
    ascending order; a witness that happens to extend the whole row is
    surfaced as a bonus direct fill of the target cell.
    """
    assert table.cells[row][target_col] is None
    oracle = table.instance.matroid
    scan = AddableScan()
    row_set = set(table.row_set(row))
    displaced = table.cells[row][via_col]
    if displaced is None:
        col_set = table.col_set(via_col)
        for x in table.instance.bases[row][via_col]:
            if _can_join(oracle, row_set, x) and _can_join(oracle, col_set, x):
                scan.records.append(
                    AddableRecord(row, target_col, via_col, x, None, None)
                )
        return scan

    witnesses = _target_witnesses(table, row, target_col)
    reduced = row_set - {displaced}
    usable: list[int] = []
    seen_bonus: set[int] = set()
    for y in witnesses:
        if y != displaced and y in reduced:
            continue
        usable.append(y)
        if y not in row_set and y not in seen_bonus:
            if oracle.is_independent(row_set | {y}):
                seen_bonus.add(y)
                scan.bonus_fills.append(PlaceDirect(row, target_col, y))
    for x in table.instance.bases[row][via_col]:
        if x == displaced or x in reduced:
            continue
        for y in usable:
            if y == x:
                continue
            candidate = reduced | {y, x}
            if len(candidate) == len(reduced) + 2 and oracle.is_independent(candidate):
                scan.records.append(
                    AddableRecord(row, target_col, via_col, x, y, displaced)
                )
                break
    return scan


def removable_positions(table: Table, row: int, target_col: int) -> RemovableScan:
    """All positions of other rows freeable through an addable element.

    Addable elements that the (post-swap) source column accepts outright
    are surfaced as direct fill-count increase opportunities instead of
    removal records; the special case where the addable element already
    sits in the source column yields exactly the record that moves it
    within its column.
    """
    assert table.cells[row][target_col] is None
    oracle = table.instance.matroid
    out = RemovableScan()
    inst = table.instance
    for via in range(inst.n):
        scan = addable_elements(table, row, target_col, via)
        for bonus in scan.bonus_fills:
            if bonus not in out.opportunities:
                out.opportunities.append(bonus)
        out.addable_by_col[via] = scan.records
        displaced = table.cells[row][via]
        col_after = set(table.col_set(via))
        if displaced is not None:
            col_after.discard(displaced)
        for rec in scan.records:
            if rec.witness is None:
                # Source cell empty: addability already implies the column
                # accepts the element, a straight placement there.
                out.opportunities.append(PlaceDirect(row, via, rec.elem))
                continue
            x = rec.elem
            if x in col_after:
                drain_row = next(
                    i
                    for i in range(inst.f)
                    if i != row and table.cells[i][via] == x
                )
                out.records.append(RemovableRecord(rec, drain_row, x))
                continue
            if oracle.is_independent(col_after | {x}):
                out.opportunities.append(
                    SimpleSwap(row, target_col, via, rec.witness, x)
                )
                continue
            for drain_row in range(inst.f):
                if drain_row == row:
                    continue
                removed = table.cells[drain_row][via]
                if removed is None:
                    continue
                candidate = (col_after - {removed}) | {x}
                if oracle.is_independent(candidate):
                    out.records.append(RemovableRecord(rec, drain_row, removed))
    return out


def matching_injection(table: Table, row: int, via_col: int) -> dict[int, int]:
    """Injection from the row's entries into a source basis such that each
    image is independent of the row minus its preimage.

    Found by augmenting-path bipartite matching; the matching condition
    is guaranteed for genuine matroids, so failure aborts the run.
    """
    oracle = table.instance.matroid
    entries = table.row_tuple(row)
    targets = table.instance.bases[row][via_col]
    adjacency: dict[int, list[int]] = {}
    for x in entries:
        remainder = set(entries) - {x}
        adjacency[x] = [
            y for y in targets if oracle.is_independent(remainder | {y})
        ]
    matched_to: dict[int, int] = {}

    def assign(x: int, banned: set[int]) -> bool:
        for y in adjacency[x]:
            if y in banned:
                continue
            banned.add(y)
            if y not in matched_to or assign(matched_to[y], banned):
                matched_to[y] = x
                return True
        return False

    for x in entries:
        if not assign(x, set()):
            raise OracleViolationError(
                f"no saturating matching for row {row} into column {via_col}; "
                "oracle violates the matroid axioms"
            )
    return {x: y for y, x in matched_to.items()}


# ---------------------------------------------------------------------------
# Counting-guarantee audit (consumed by the solver's claim sweep)


@dataclass
class CellAudit:
    checks: dict[str, int] = field(default_factory=dict)
    violations: dict[str, list[str]] = field(default_factory=dict)

    def tally(self, name: str) -> None:
        self.checks[name] = self.checks.get(name, 0) + 1

    def violate(self, name: str, detail: str) -> None:
        self.violations.setdefault(name, []).append(detail)

    def merge(self, other: "CellAudit") -> None:
        for k, v in other.checks.items():
            self.checks[k] = self.checks.get(k, 0) + v
        for k, v in other.violations.items():
            self.violations.setdefault(k, []).extend(v)

    @property
    def ok(self) -> bool:
        return not self.violations


def audit_cell(table: Table, row: int, target_col: int) -> CellAudit:
    """Re-check every counting guarantee at one empty cell, zero tolerance.

    * swappable_lower_bound: without a direct add there are at least
      n - |column set| swappable columns;
    * addable_coverage: per swappable column, every element extending the
      row is either a surfaced bonus fill or recorded addable;
    * removable_lower_bound: per column without an increase opportunity,
      at least as many distinct removable positions as addable elements;
    * removable_product_bound: with no direct opportunity anywhere, at
      least (n - |row|) * (n - |column|) distinct removable positions;
    * committable: every surfaced record and opportunity is accepted by
      the table.
    """
    audit = CellAudit()
    inst = table.instance
    oracle = inst.matroid
    n = inst.n
    where = f"cell ({row},{target_col})"

    direct = direct_add(table, row, target_col)
    options = swappable_columns(table, row, target_col)
    scan = removable_positions(table, row, target_col)

    if direct is None:
        audit.tally("swappable_lower_bound")
        needed = n - table.col_size(target_col)
        if len(options) < needed:
            audit.violate(
                "swappable_lower_bound",
                f"{where}: {len(options)} swappable columns < {needed}",
            )

    row_set = set(table.row_set(row))
    bonus_elems = {mv.elem for mv in scan.opportunities if isinstance(mv, PlaceDirect) and mv.col == target_col}
    for opt in options:
        audit.tally("addable_coverage")
        witness_ok = opt.witness not in row_set and oracle.is_independent(
            row_set | {opt.witness}
        )
        if witness_ok and opt.witness in bonus_elems:
            continue
        recorded = {rec.elem for rec in scan.addable_by_col.get(opt.col, [])}
        for x in inst.bases[row][opt.col]:
            if x in row_set or not oracle.is_independent(row_set | {x}):
                continue
            if x not in recorded:
                audit.violate(
                    "addable_coverage",
                    f"{where}: element {x} of column {opt.col} missing from "
                    "addable records with no bonus fill surfaced",
                )

    opportunity_cols = scan.opportunity_cols()
    positions_by_col: dict[int, set[tuple[int, int]]] = {}
    for rec in scan.records:
        positions_by_col.setdefault(rec.addable.via_col, set()).add(rec.position)
    for via, addables in scan.addable_by_col.items():
        if not addables or via in opportunity_cols:
            continue
        audit.tally("removable_lower_bound")
        found = len(positions_by_col.get(via, ()))
        if found < len(addables):
            audit.violate(
                "removable_lower_bound",
                f"{where}: column {via} has {found} removable positions "
                f"< {len(addables)} addable elements",
            )

    if direct is None and not scan.opportunities:
        audit.tally("removable_product_bound")
        bound = (n - table.row_size(row)) * (n - table.col_size(target_col))
        total = len(scan.distinct_positions())
        if total < bound:
            audit.violate(
                "removable_product_bound",
                f"{where}: {total} distinct removable positions < {bound}",
            )

    for rec in scan.records:
        audit.tally("committable")
        if not table.admits(rec.as_move()):
            audit.violate("committable", f"{where}: record {rec} rejected")
    for mv in scan.opportunities:
        audit.tally("committable")
        if not table.admits(mv):
            audit.violate("committable", f"{where}: opportunity {mv} rejected")

    return audit


def audit_matchings(table: Table, row: int) -> CellAudit:
    """Run the row matching against every column basis and check its contract."""
    audit = CellAudit()
    inst = table.instance
    oracle = inst.matroid
    entries = set(table.row_set(row))
    for via in range(inst.n):
        audit.tally("row_matching")
        try:
            phi = matching_injection(table, row, via)
        except OracleViolationError as exc:
            audit.violate("row_matching", f"row {row} col {via}: {exc}")
            continue
        if len(set(phi.values())) != len(phi) or set(phi) != entries:
            audit.violate("row_matching", f"row {row} col {via}: not an injection")
            continue
        for x, y in phi.items():
            if not oracle.is_independent((entries - {x}) | {y}):
                audit.violate(
                    "row_matching",
                    f"row {row} col {via}: image of {x} not independent",
                )
    return audit
