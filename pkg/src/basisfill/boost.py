"""Rebalancing when cascades run dry: distinct missing columns, the
missing-depth level structure, and out-star transfers.

The goal is to reshape the table, without changing the fill count, until
either some row misses entries in at least D columns (a deep row) or
some row holds at least D positions removable toward another row's
assigned empty cell (a rich pair). Either hands the cascade phase a much
larger initial frontier. D is the threshold ceil(2C + 4) from
``cascade.GrowthParams``.

Machinery:

* ``assign_distinct_missing`` gives every row its own column, empty for
  non-full rows, using committed simple swaps only;
* the *level* E is the largest depth such that enough rows miss at
  least E entries, where "enough" is the quota (eps / (4 D^2))**E * n
  clamped to at least one row (the raw quota is far below 1 at desk
  scale);
* the auxiliary digraph has an arc j -> i when row j holds at least
  E + 1 positions removable toward (i, assigned column of i);
* applying a k-out-star transfers k entries out of the centre row, one
  to each leaf, via removal steps on pairwise distinct positions; the
  centre then misses k more entries, pushing the level up.

Out-stars are found greedily and re-validated against the live table at
application time: stars share no rows, but an earlier transfer can still
touch a column another star relied on, in which case the stale star is
skipped and recorded rather than forced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .cascade import GrowthParams
from .errors import InfeasibleError, InputError, RejectedMove
from .swaps import removable_positions, swappable_columns
from .table import RemovalStep, SimpleSwap, Table, Transfer


@dataclass(frozen=True)
class MissingAssignment:
    """Pairwise-distinct column per row; empty there when the row is not full."""

    columns: tuple[int, ...]
    swaps_committed: int

    def column_of(self, row: int) -> int:
        return self.columns[row]


def assign_distinct_missing(table: Table) -> MissingAssignment:
    """Assign each row its own column, swapping rows whose empty columns
    are all taken. Row sizes and the fill count are unchanged."""
    inst = table.instance
    if inst.f > inst.n:
        raise InputError("more rows than columns; distinct assignment impossible")
    used: set[int] = set()
    columns: list[int] = []
    swaps = 0
    for row in range(inst.f):
        empties = [c for c in table.empty_cols(row) if c not in used]
        if table.row_size(row) == inst.n:
            pick = next(c for c in range(inst.n) if c not in used)
        elif empties:
            pick = empties[0]
        else:
            anchor = table.empty_cols(row)[0]
            options = [
                opt
                for opt in swappable_columns(table, row, anchor)
                if opt.col not in used
            ]
            if not options:
                raise InfeasibleError(
                    f"row {row}: no unused swappable column for reassignment"
                )
            opt = options[0]
            table.commit(SimpleSwap(row, anchor, opt.col, opt.witness))
            swaps += 1
            pick = opt.col
        used.add(pick)
        columns.append(pick)
    return MissingAssignment(tuple(columns), swaps)


def compute_level(table: Table, params: GrowthParams) -> tuple[int, tuple[int, ...]]:
    """Largest depth E in [1, D-1] whose missing-count quota is met."""
    inst = table.instance
    missing = [table.missing_count(i) for i in range(inst.f)]
    if not any(missing):
        raise InputError("compute_level requires a row with a missing entry")
    d = params.missing_threshold
    base = params.epsilon / (4 * d * d)
    best: Optional[int] = None
    for level in range(1, max(d, 2)):
        quota = max(1, math.ceil(base**level * inst.n))
        if sum(1 for m in missing if m >= level) >= quota:
            best = level
    if best is None:
        best = 1
    rows = tuple(i for i in range(inst.f) if missing[i] >= best)
    return best, rows


@dataclass
class BoostDigraph:
    level: int
    arcs: dict[int, tuple[int, ...]]  # source row -> target rows
    # removable positions in the source row per (source, target) arc
    positions: dict[tuple[int, int], tuple[tuple[int, int], ...]]

    def out_degree(self, row: int) -> int:
        return len(self.arcs.get(row, ()))


def build_digraph(
    table: Table,
    assignment: MissingAssignment,
    level: int,
    scans: Optional[dict[int, object]] = None,
) -> BoostDigraph:
    """Arc j -> i when row j holds >= level+1 positions removable toward
    (i, assigned column). Only rows missing >= level entries receive arcs."""
    inst = table.instance
    arcs: dict[int, list[int]] = {}
    positions: dict[tuple[int, int], tuple[tuple[int, int], ...]] = {}
    for i in range(inst.f):
        if table.missing_count(i) < level:
            continue
        scan = scans[i] if scans and i in scans else removable_positions(
            table, i, assignment.column_of(i)
        )
        by_row: dict[int, set[tuple[int, int]]] = {}
        for rec in scan.records:
            by_row.setdefault(rec.drain_row, set()).add(rec.position)
        for j, pos in by_row.items():
            if len(pos) >= level + 1:
                arcs.setdefault(j, []).append(i)
                positions[(j, i)] = tuple(sorted(pos))
    return BoostDigraph(
        level=level,
        arcs={j: tuple(sorted(ts)) for j, ts in arcs.items()},
        positions=positions,
    )


@dataclass(frozen=True)
class OutStar:
    centre: int
    leaves: tuple[int, ...]


def find_out_stars(digraph: BoostDigraph, k: int) -> tuple[OutStar, ...]:
    """Greedy vertex-disjoint k-out-stars: repeatedly take the lowest
    vertex of residual out-degree >= k with its k lowest out-neighbours."""
    if k < 1:
        raise InputError("star size must be >= 1")
    removed: set[int] = set()
    stars: list[OutStar] = []
    while True:
        pick = None
        for j in sorted(digraph.arcs):
            if j in removed:
                continue
            targets = [i for i in digraph.arcs[j] if i not in removed and i != j]
            if len(targets) >= k:
                pick = OutStar(j, tuple(targets[:k]))
                break
        if pick is None:
            return tuple(stars)
        stars.append(pick)
        removed.add(pick.centre)
        removed.update(pick.leaves)


def apply_out_star(
    table: Table,
    star: OutStar,
    assignment: MissingAssignment,
    level: int,
) -> Optional[Transfer]:
    """Transfer level+1 entries out of the centre row, one per leaf.

    Candidates are recomputed against the live table and the chosen
    positions are made pairwise distinct greedily (each candidate set
    has more members than there are leaves, so the greedy choice always
    extends). The whole transfer is validated on a scratch copy first
    and committed as one batch; ``None`` means the star went stale and
    was skipped.
    """
    probe = table.copy()
    used_positions: set[tuple[int, int]] = set()
    steps: list[RemovalStep] = []
    for leaf in star.leaves:
        scan = removable_positions(probe, leaf, assignment.column_of(leaf))
        chosen = None
        for rec in scan.records:
            if rec.drain_row != star.centre or rec.position in used_positions:
                continue
            mv = rec.as_move()
            try:
                probe.commit(mv)
            except RejectedMove:
                continue
            chosen = (rec.position, mv)
            break
        if chosen is None:
            return None
        used_positions.add(chosen[0])
        steps.append(chosen[1])
    transfer = Transfer(tuple(steps))
    table.commit(transfer)
    return transfer


@dataclass
class BoostOutcome:
    kind: str  # increased | deep_row | rich_pair | progressed | stalled
    rows: tuple[int, ...] = ()
    events: list[dict] = field(default_factory=list)

    def to_data(self) -> dict:
        return {"kind": self.kind, "rows": list(self.rows), "events": self.events}


def boost(table: Table, params: GrowthParams) -> BoostOutcome:
    """Orchestrate rebalancing rounds until a consumable outcome appears.

    Per round: reassign distinct missing columns, look for a deep row or
    a rich pair, otherwise raise the level by applying every out-star
    found. Any fill-count increase surfaced along the way is committed
    immediately. Rounds are bounded by the missing threshold.
    """
    inst = table.instance
    d = params.missing_threshold
    events: list[dict] = []
    applied_any = False
    for round_no in range(d):
        try:
            assignment = assign_distinct_missing(table)
        except InfeasibleError as exc:
            events.append({"round": round_no, "assignment_failed": str(exc)})
            return BoostOutcome("stalled", events=events)
        if assignment.swaps_committed:
            events.append(
                {"round": round_no, "assignment_swaps": assignment.swaps_committed}
            )

        deep = [i for i in range(inst.f) if table.missing_count(i) >= d]
        if deep:
            events.append({"round": round_no, "deep_row": deep[0]})
            return BoostOutcome("deep_row", rows=(deep[0],), events=events)

        scans: dict[int, object] = {}
        for i in range(inst.f):
            if table.missing_count(i) == 0:
                continue
            scan = removable_positions(table, i, assignment.column_of(i))
            if scan.opportunities:
                table.commit(scan.opportunities[0])
                events.append({"round": round_no, "increased_at_row": i})
                return BoostOutcome("increased", rows=(i,), events=events)
            scans[i] = scan
            by_row: dict[int, set[tuple[int, int]]] = {}
            for rec in scan.records:
                by_row.setdefault(rec.drain_row, set()).add(rec.position)
            for j in sorted(by_row):
                if len(by_row[j]) >= d:
                    events.append({"round": round_no, "rich_pair": [i, j]})
                    return BoostOutcome("rich_pair", rows=(i, j), events=events)

        level, _ = compute_level(table, params)
        digraph = build_digraph(table, assignment, level, scans=scans)
        stars = find_out_stars(digraph, level + 1)
        events.append(
            {
                "round": round_no,
                "level": level,
                "arcs": sum(len(t) for t in digraph.arcs.values()),
                "stars_found": len(stars),
            }
        )
        if not stars:
            kind = "progressed" if applied_any else "stalled"
            return BoostOutcome(kind, events=events)
        applied = 0
        for star in stars:
            transfer = apply_out_star(table, star, assignment, level)
            if transfer is None:
                events.append(
                    {"round": round_no, "stale_star": [star.centre, *star.leaves]}
                )
                continue
            applied += 1
            applied_any = True
        events.append({"round": round_no, "stars_applied": applied})
        if applied == 0:
            kind = "progressed" if applied_any else "stalled"
            return BoostOutcome(kind, events=events)
    return BoostOutcome("progressed" if applied_any else "stalled", events=events)
