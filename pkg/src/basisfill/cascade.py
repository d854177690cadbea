"""Cascading swaps: frontier expansion and the growth-constant arithmetic.

A cascade frees up a chain of positions across distinct columns. Level 0
is an empty cell of the start row; a frontier entry at level l is a
position (row, col) together with the removal-step list (its *delta*)
that, replayed on a snapshot of the root table, leaves that position
empty while keeping the table valid and the fill count unchanged. An
*improving cascade* is a delta followed by a terminal fill-count
increase; committing one raises the fill count by exactly 1.

Frontier growth bookkeeping uses the constant C(epsilon), the smallest
value satisfying

    C * (1 + eps/2)**(l-1) / (1 - eps) - l - 1  >=  C * (1 + eps/2)**l

for every level l >= 1. Rearranged, the inequality says C >= r(l) where

    r(l) = (l + 1) / ((1/(1-eps) - (1+eps/2)) * (1+eps/2)**(l-1)),

and r is unimodal with its maximizer at most ceil(2/eps), so a finite
scan finds the exact maximum; we evaluate it in exact rational
arithmetic. The derived threshold D = ceil(2*C + 4) drives the
rebalancing phase, and the depth cap min(f - 1, floor(eps*n/4)) bounds
how many levels a cascade may expand.

The per-level frontier sizes of an exhausted run feed
``check_recurrence``, which reports whether

    |Q_l| >= |Q_{l-1}| / (f - l) * (n - f - l) - (l + 1) * n

held at each level. At desk scale the right side is frequently negative
and the bound holds trivially; it is reported, never asserted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .errors import InputError
from .swaps import direct_add, matching_injection, removable_positions
from .table import Move, Table


# ---------------------------------------------------------------------------
# Growth constant


@dataclass(frozen=True)
class GrowthConstant:
    value: float
    exact: Fraction
    maximizers: tuple[int, ...]


def _level_ratio(epsilon: Fraction, level: int) -> Fraction:
    gap = 1 / (1 - epsilon) - (1 + epsilon / 2)
    return (level + 1) / (gap * (1 + epsilon / 2) ** (level - 1))


def compute_growth_constant(epsilon: Fraction) -> GrowthConstant:
    """Minimal C satisfying the growth inequality for all levels >= 1."""
    epsilon = Fraction(epsilon)
    if not 0 < epsilon < 1:
        raise InputError("epsilon must lie in (0, 1)")
    scan_to = max(100, math.ceil(2 / epsilon) + 8)
    best = Fraction(0)
    maximizers: list[int] = []
    for level in range(1, scan_to + 1):
        ratio = _level_ratio(epsilon, level)
        if ratio > best:
            best = ratio
            maximizers = [level]
        elif ratio == best:
            maximizers.append(level)
    return GrowthConstant(float(best), best, tuple(maximizers))


def growth_inequality_holds(
    c_value: Union[Fraction, float], epsilon: Fraction, level: int
) -> bool:
    """Check the growth inequality at one level.

    Exact rational arithmetic for moderate levels; beyond that the ratio
    has decayed geometrically, so a log-domain float comparison with a
    1e-9 relative slack is ample.
    """
    epsilon = Fraction(epsilon)
    if level <= 512 and isinstance(c_value, Fraction):
        return c_value >= _level_ratio(epsilon, level)
    gap = 1 / (1 - epsilon) - (1 + epsilon / 2)
    log_ratio = (
        math.log(level + 1)
        - math.log(float(gap))
        - (level - 1) * math.log(1 + float(epsilon) / 2)
    )
    return math.log(float(c_value)) >= log_ratio - 1e-9


@dataclass(frozen=True)
class GrowthParams:
    """Derived solver constants for one epsilon."""

    epsilon: Fraction
    growth: GrowthConstant
    missing_threshold: int  # D = ceil(2C + 4)

    @classmethod
    def from_epsilon(cls, epsilon: Fraction) -> "GrowthParams":
        growth = compute_growth_constant(epsilon)
        return cls(
            epsilon=Fraction(epsilon),
            growth=growth,
            missing_threshold=math.ceil(2 * growth.exact + 4),
        )

    def depth_cap(self, n: int, f: int) -> int:
        return min(f - 1, math.floor(self.epsilon * n / 4))


# ---------------------------------------------------------------------------
# Cascade search


@dataclass(frozen=True)
class FrontierEntry:
    row: int
    col: int
    occupant: int  # value at (row, col) in the root table
    delta: tuple[Move, ...]
    used_cols: frozenset[int]


@dataclass
class CascadeState:
    rows: tuple[int, ...]
    frontier: dict[tuple[int, int], FrontierEntry]
    sizes: list[int]
    cap_hits: int = 0
    matchings_run: int = 0
    fresh_images: int = 0  # matched images absent from the snapshot values


@dataclass(frozen=True)
class ImprovingCascade:
    moves: tuple[Move, ...]

    def commit(self, table: Table) -> None:
        for mv in self.moves:
            table.commit(mv)


@dataclass
class CascadeTrace:
    start_row: int
    rows: tuple[int, ...]
    sizes: tuple[int, ...]
    cap_hits: int
    exhausted: bool  # False when the depth cap stopped the run

    def to_data(self) -> dict:
        return {
            "start_row": self.start_row,
            "rows": list(self.rows),
            "frontier_sizes": list(self.sizes),
            "cap_hits": self.cap_hits,
            "exhausted": self.exhausted,
        }


def _cap_frontier(
    frontier: dict[tuple[int, int], FrontierEntry], cap: int
) -> tuple[dict[tuple[int, int], FrontierEntry], int]:
    if len(frontier) <= cap:
        return frontier, 0
    dropped = len(frontier) - cap
    kept = dict(sorted(frontier.items())[:cap])
    return kept, dropped


def init_cascade(
    table: Table, start_row: int, frontier_cap: int
) -> Union[ImprovingCascade, CascadeState]:
    """Level 0: scan every empty cell of the start row.

    Any surfaced fill-count increase is returned immediately as a
    zero-delta improving cascade; otherwise the initial frontier holds
    one entry per removable position outside the start row.
    """
    empties = table.empty_cols(start_row)
    if not empties:
        raise InputError(f"row {start_row} has no empty cell")
    frontier: dict[tuple[int, int], FrontierEntry] = {}
    for col in empties:
        mv = direct_add(table, start_row, col)
        if mv is not None:
            return ImprovingCascade((mv,))
        scan = removable_positions(table, start_row, col)
        if scan.opportunities:
            return ImprovingCascade((scan.opportunities[0],))
        for rec in scan.records:
            key = rec.position
            if key in frontier:
                continue
            frontier[key] = FrontierEntry(
                row=rec.drain_row,
                col=rec.addable.via_col,
                occupant=rec.removed_elem,
                delta=(rec.as_move(),),
                used_cols=frozenset({col, rec.addable.via_col}),
            )
    frontier, dropped = _cap_frontier(frontier, frontier_cap)
    return CascadeState(
        rows=(start_row,), frontier=frontier, sizes=[len(frontier)], cap_hits=dropped
    )


class FrontierExhausted:
    """Signal: no frontier entries remain to expand."""


def extend_cascade(
    table: Table,
    state: CascadeState,
    frontier_cap: int,
    forced_row: Optional[int] = None,
) -> Union[ImprovingCascade, CascadeState, FrontierExhausted]:
    """Expand one level of the frontier.

    Picks the row holding the most frontier positions (lowest id on
    ties, or ``forced_row`` when it holds any), replays each position's
    delta on a snapshot, and either returns the first improving cascade
    or collects the next frontier, excluding rows already chosen and
    columns already used by the originating delta.
    """
    if not state.frontier:
        return FrontierExhausted()
    per_row: dict[int, int] = {}
    for r, _ in state.frontier:
        per_row[r] = per_row.get(r, 0) + 1
    if forced_row is not None and per_row.get(forced_row):
        chosen = forced_row
    else:
        chosen = min(per_row, key=lambda r: (-per_row[r], r))

    # Row matchings feed the preferred-image diagnostic and exercise the
    # saturating-matching guarantee on live states.
    images: dict[int, dict[int, int]] = {}
    for col in range(table.instance.n):
        images[col] = matching_injection(table, chosen, col)
        state.matchings_run += 1

    banned_rows = set(state.rows) | {chosen}
    new_frontier: dict[tuple[int, int], FrontierEntry] = {}
    keys = sorted(k for k in state.frontier if k[0] == chosen)
    for key in keys:
        entry = state.frontier[key]
        snap = table.copy()
        for mv in entry.delta:
            snap.commit(mv)
        mv = direct_add(snap, entry.row, entry.col)
        if mv is not None:
            return ImprovingCascade(entry.delta + (mv,))
        scan = removable_positions(snap, entry.row, entry.col)
        if scan.opportunities:
            return ImprovingCascade(entry.delta + (scan.opportunities[0],))
        snap_values = snap.values()
        for col, phi in images.items():
            y = phi.get(entry.occupant)
            if y is not None and y not in snap_values:
                state.fresh_images += 1
        for rec in scan.records:
            pos = rec.position
            if pos[0] in banned_rows or rec.addable.via_col in entry.used_cols:
                continue
            if pos in new_frontier:
                continue
            # The delta leaves this row and column untouched, so the
            # removed element equals the root table's value there.
            new_frontier[pos] = FrontierEntry(
                row=pos[0],
                col=pos[1],
                occupant=rec.removed_elem,
                delta=entry.delta + (rec.as_move(),),
                used_cols=entry.used_cols | {rec.addable.via_col},
            )
    new_frontier, dropped = _cap_frontier(new_frontier, frontier_cap)
    return CascadeState(
        rows=state.rows + (chosen,),
        frontier=new_frontier,
        sizes=state.sizes + [len(new_frontier)],
        cap_hits=state.cap_hits + dropped,
        matchings_run=state.matchings_run,
        fresh_images=state.fresh_images,
    )


def run_cascade(
    table: Table,
    start_row: int,
    depth_cap: int,
    frontier_cap: int,
    forced_second: Optional[int] = None,
) -> Union[ImprovingCascade, CascadeTrace]:
    """Iterate frontier expansion from one row up to the depth cap."""
    state = init_cascade(table, start_row, frontier_cap)
    if isinstance(state, ImprovingCascade):
        return state
    depth = 0
    while depth < depth_cap:
        forced = forced_second if depth == 0 else None
        result = extend_cascade(table, state, frontier_cap, forced_row=forced)
        if isinstance(result, ImprovingCascade):
            return result
        if isinstance(result, FrontierExhausted):
            return CascadeTrace(
                start_row=start_row,
                rows=state.rows,
                sizes=tuple(state.sizes),
                cap_hits=state.cap_hits,
                exhausted=True,
            )
        state = result
        depth += 1
    return CascadeTrace(
        start_row=start_row,
        rows=state.rows,
        sizes=tuple(state.sizes),
        cap_hits=state.cap_hits,
        exhausted=not state.frontier,
    )


def check_recurrence(
    sizes: tuple[int, ...] | list[int], n: int, f: int
) -> list[dict]:
    """Per-level report of the frontier growth inequality.

    The bound is only guaranteed when no fill-count increase was
    available, so violations are reported, not asserted.
    """
    report = []
    for level in range(1, len(sizes)):
        prev = sizes[level - 1]
        if f - level <= 0:
            break
        rhs = Fraction(prev, f - level) * (n - f - level) - (level + 1) * n
        holds = sizes[level] >= rhs
        report.append(
            {
                "level": level,
                "frontier": sizes[level],
                "bound": float(rhs),
                "holds": bool(holds),
                "trivial": rhs <= 0,
            }
        )
    return report
