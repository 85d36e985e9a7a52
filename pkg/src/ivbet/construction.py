"""The sequence-building engine.

One run pits the oracle-following adversary against a finite, prioritized
family of opponent strategies. The adversary's capital is kept as a constant
reserve of 1 plus one gambler account per opponent index; each stage the
least index that needs attention acts, the next bit of the sequence is chosen
on its behalf, and exactly one gambler moves by exactly one quantum.

An opponent needs attention when its gambler is unfunded, or while it still
behaves like a fair integer strategy and is either diverging on both next
bits, idly hoarding more capital than its gambler, or actively betting. For a
betting opponent the bit is chosen by comparing the two extended ratios
(gambler+1)/opponent-if-followed vs (gambler-1)/opponent-if-defied, with any
denominator 0 counting as infinity and ties resolved against the oracle (the
direction that shrinks both accounts).

Indices beyond the family act as nowhere-converging strategies: they absorb
one funding grant each, which is how the adversary's capital keeps growing
once every real opponent is defeated or settled.

A run is strictly sequential; distinct runs are independent. Traces are
immutable once built.
"""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Optional, Sequence, Union

from .core import BitString, ExtRatio, Oracle, flip, ratio_cmp
from .martingale import Node, OpponentStrategy

__all__ = [
    "DIVERGED",
    "INACTIVE",
    "Attention",
    "InactiveReason",
    "ActivityStatus",
    "ACTIVE",
    "ConstructionState",
    "new_state",
    "update_activity",
    "refresh_activity",
    "requires_attention",
    "scan_attention",
    "choose_bit_against_bet",
    "run_stage",
    "build_sequence",
    "StageRecord",
    "Trace",
    "write_trace_csv",
]

DIVERGED = "div"
INACTIVE = "inactive"

OpponentValue = Union[int, str]  # an int, or the DIVERGED / INACTIVE marker


class Attention(Enum):
    """Why an index needs attention this stage."""

    UNFUNDED = "unfunded"  # its gambler account is at 0
    STALLED = "stalled"    # opponent diverges on both next bits
    HOARDING = "hoarding"  # opponent not betting, but still richer than its gambler
    BETTING = "betting"    # opponent wagers on the next bit


class InactiveReason(Enum):
    FAIRNESS_VIOLATION = "fairness_violation"
    MIXED_CONVERGENCE = "mixed_convergence"
    PARENT_DIVERGENCE = "parent_divergence"


@dataclass(frozen=True)
class ActivityStatus:
    """Active, or inactive for a recorded reason since a recorded stage.

    Inactivity is permanent: once an opponent stops looking like a fair
    integer strategy along the sequence, it is ignored forever.
    """

    reason: Optional[InactiveReason] = None
    since_stage: Optional[int] = None

    @property
    def active(self) -> bool:
        return self.reason is None


ACTIVE = ActivityStatus()


class ConstructionState:
    """Mutable state of one run: the prefix built so far plus all accounts.

    The reserve is constantly 1; the adversary capital is tracked
    incrementally and always equals 1 plus the sum of all gambler accounts.
    Opponent evaluations along the prefix and its two frontier children are
    memoized as walker nodes, so each stage costs O(family size).
    """

    def __init__(self, oracle: Oracle, family: Sequence[OpponentStrategy]):
        self.oracle = oracle
        self.family = list(family)
        self.bits: list[int] = []
        self.gamblers: dict[int, int] = {}
        self.reserve = 1
        self.adversary = 1
        self.stage = 0
        self.activity: list[ActivityStatus] = [ACTIVE] * len(self.family)
        self.nodes: list[Optional[Node]] = [s.initial_node() for s in self.family]
        self.frontier: list[tuple[Optional[Node], Optional[Node]]] = [(None, None)] * len(self.family)
        self._refreshed_for = -1  # stage number the frontier/activity refresh is valid for
        self.next_fresh = len(self.family)  # least never-funded index beyond the family

    @property
    def prefix(self) -> BitString:
        return BitString(self.bits)

    def gambler(self, e: int) -> int:
        return self.gamblers.get(e, 0)


def new_state(oracle: Oracle, family: Sequence[OpponentStrategy]) -> ConstructionState:
    return ConstructionState(oracle, family)


def update_activity(state: ConstructionState, e: int) -> ActivityStatus:
    """Incrementally refresh opponent e's activity for the current stage.

    Only the newly exposed frontier is checked: the current prefix must
    converge, and its two children must converge symmetrically and average to
    the parent when they do. Indices beyond the family never converge at all,
    so they are never active. The result is recorded and monotone (inactive
    stays inactive).
    """
    if e >= len(state.family):
        return ActivityStatus(InactiveReason.PARENT_DIVERGENCE, since_stage=1)
    status = state.activity[e]
    if not status.active:
        return status
    strategy = state.family[e]
    node = state.nodes[e]
    if node is None:
        status = ActivityStatus(InactiveReason.PARENT_DIVERGENCE, state.stage + 1)
    else:
        c0 = strategy.child_node(node, 0)
        c1 = strategy.child_node(node, 1)
        state.frontier[e] = (c0, c1)
        if (c0 is None) != (c1 is None):
            status = ActivityStatus(InactiveReason.MIXED_CONVERGENCE, state.stage + 1)
        elif c0 is not None and c1 is not None and 2 * node.value != c0.value + c1.value:
            status = ActivityStatus(InactiveReason.FAIRNESS_VIOLATION, state.stage + 1)
    state.activity[e] = status
    return status


def refresh_activity(state: ConstructionState) -> None:
    """Refresh every real opponent once for the current stage (idempotent)."""
    if state._refreshed_for == state.stage:
        return
    for e in range(len(state.family)):
        update_activity(state, e)
    state._refreshed_for = state.stage


def requires_attention(state: ConstructionState, e: int) -> Optional[Attention]:
    """The attention reason for index e at the current stage, or None.

    An unfunded gambler always needs attention, whatever the opponent is
    doing. Otherwise only active opponents qualify: stalled if both next
    values diverge, hoarding if both next values converge equal to the
    current value which still exceeds the gambler, betting if both next
    values converge away from the current value.
    """
    refresh_activity(state)
    if state.gambler(e) == 0:
        return Attention.UNFUNDED
    if e >= len(state.family) or not state.activity[e].active:
        return None
    node = state.nodes[e]
    c0, c1 = state.frontier[e]
    if c0 is None and c1 is None:
        return Attention.STALLED
    if c0 is None or c1 is None:
        return None  # mixed convergence was just marked inactive; defensive
    parent = node.value
    if c0.value == parent and c1.value == parent:
        return Attention.HOARDING if parent > state.gambler(e) else None
    if c0.value != parent and c1.value != parent:
        return Attention.BETTING
    return None  # one child equal, one not: unfair, unreachable while active


def scan_attention(state: ConstructionState) -> tuple[int, Attention]:
    """The least index needing attention; always exists.

    Real opponents are scanned in priority order; failing those, the least
    never-funded index beyond the family qualifies as unfunded. Indices
    beyond the family keep their single funding grant forever, so tracking
    the next fresh one is enough to keep the scan finite.
    """
    refresh_activity(state)
    for e in range(len(state.family)):
        reason = requires_attention(state, e)
        if reason is not None:
            return e, reason
    return state.next_fresh, Attention.UNFUNDED


def choose_bit_against_bet(gambler: int, opponent_if_followed: int, opponent_if_defied: int) -> bool:
    """Whether to copy the oracle's bit when the acting opponent is betting.

    Compares (gambler+1)/opponent_if_followed against
    (gambler-1)/opponent_if_defied as extended ratios (denominator 0 is
    infinite). Copy the oracle exactly when the follow side is strictly
    greater; on a tie, defy, which shrinks both accounts.
    """
    if gambler < 1:
        raise ValueError(f"betting action requires a funded gambler, got {gambler}")
    if opponent_if_followed < 0 or opponent_if_defied < 0:
        raise ValueError("opponent capitals cannot be negative")
    follow = ExtRatio(gambler + 1, opponent_if_followed)
    defy = ExtRatio(gambler - 1, opponent_if_defied)
    return ratio_cmp(follow, defy) > 0


@dataclass(frozen=True)
class StageRecord:
    """One stage of a run: who acted, why, the chosen bit, and all balances.

    stage is 1-based; the bit chosen at stage s is position s-1 of the
    sequence. gamblers snapshots the real opponents' accounts only; accounts
    of indices beyond the family are implied by the acting history (each
    absorbs a single grant and never moves again).
    """

    stage: int
    acting: int
    reason: Attention
    bit: int
    matches_oracle: bool
    adversary: int
    gamblers: tuple[int, ...]
    opponents: tuple[OpponentValue, ...]


@dataclass(frozen=True)
class Trace:
    """Immutable record of a full run, sufficient to re-verify it."""

    oracle_descriptor: str
    opponent_names: tuple[str, ...]
    opponent_flavors: tuple[str, ...]
    initial_opponents: tuple[OpponentValue, ...]
    records: tuple[StageRecord, ...]
    final_prefix: BitString

    @property
    def stages(self) -> int:
        return len(self.records)

    @property
    def family_size(self) -> int:
        return len(self.opponent_names)

    def adversary_series(self) -> list[int]:
        """Adversary capital by prefix length, starting at the empty string."""
        return [1] + [r.adversary for r in self.records]

    def gambler_series(self, e: int) -> list[int]:
        """Account trajectory of real opponent e, starting at 0."""
        if not 0 <= e < self.family_size:
            raise IndexError(f"no real opponent with index {e}")
        return [0] + [r.gamblers[e] for r in self.records]

    def opponent_series(self, e: int) -> list[OpponentValue]:
        """Value trajectory of real opponent e along the sequence, from the empty string."""
        if not 0 <= e < self.family_size:
            raise IndexError(f"no real opponent with index {e}")
        return [self.initial_opponents[e]] + [r.opponents[e] for r in self.records]


def _advance(state: ConstructionState, e: int, reason: Attention, bit: int) -> StageRecord:
    """Settle one stage with the given action; shared by run_stage and replays."""
    s = state.stage
    oracle_bit = state.oracle.bit(s)
    matches = bit == oracle_bit
    if reason is Attention.BETTING:
        delta = 1 if matches else -1
    else:
        delta = 1
    balance = state.gambler(e) + delta
    if balance < 0:
        raise ValueError(f"gambler {e} would go negative at stage {s + 1}")
    state.gamblers[e] = balance
    if e == state.next_fresh:
        state.next_fresh += 1
    state.adversary += 1 if matches else -1
    state.bits.append(bit)

    values: list[OpponentValue] = []
    for i in range(len(state.family)):
        if not state.activity[i].active:
            state.nodes[i] = None
            values.append(INACTIVE)
            continue
        c0, c1 = state.frontier[i]
        child = c0 if bit == 0 else c1
        state.nodes[i] = child
        values.append(DIVERGED if child is None else child.value)
    state.stage += 1
    return StageRecord(
        stage=state.stage,
        acting=e,
        reason=reason,
        bit=bit,
        matches_oracle=matches,
        adversary=state.adversary,
        gamblers=tuple(state.gambler(i) for i in range(len(state.family))),
        opponents=tuple(values),
    )


def run_stage(state: ConstructionState) -> StageRecord:
    """Run one stage: refresh activity, pick the least index needing attention,
    choose the bit on its behalf, and settle all accounts."""
    refresh_activity(state)
    e, reason = scan_attention(state)
    s = state.stage
    oracle_bit = state.oracle.bit(s)
    if reason is Attention.BETTING:
        c0, c1 = state.frontier[e]
        followed = c0 if oracle_bit == 0 else c1
        defied = c1 if oracle_bit == 0 else c0
        follow = choose_bit_against_bet(state.gambler(e), followed.value, defied.value)
        bit = oracle_bit if follow else flip(oracle_bit)
    else:
        bit = oracle_bit
    return _advance(state, e, reason, bit)


def build_sequence(oracle: Oracle, family: Sequence[OpponentStrategy], num_stages: int) -> Trace:
    """Run the engine for num_stages stages from a fresh state and trace it."""
    if num_stages < 0:
        raise ValueError(f"num_stages must be >= 0, got {num_stages}")
    state = new_state(oracle, family)
    initial = tuple(
        DIVERGED if node is None else node.value for node in state.nodes
    )
    records = tuple(run_stage(state) for _ in range(num_stages))
    return Trace(
        oracle_descriptor=oracle.description,
        opponent_names=tuple(s.name for s in state.family),
        opponent_flavors=tuple(s.flavor for s in state.family),
        initial_opponents=initial,
        records=records,
        final_prefix=state.prefix,
    )


def trace_csv_lines(trace: Trace) -> list[str]:
    """The trace as CSV lines: two comment lines, a header row, one row per stage.

    Columns: stage, acting_e, reason, bit, matches_A, M_capital, then one
    G_<e> column per real opponent and one phi_<e> column holding a decimal
    value, "div", or "inactive".
    """
    e_range = range(trace.family_size)
    lines = [f"# oracle: {trace.oracle_descriptor}"]
    if trace.family_size:
        described = "; ".join(
            f"{name}:{flavor}" for name, flavor in zip(trace.opponent_names, trace.opponent_flavors)
        )
    else:
        described = "(none)"
    lines.append(f"# opponents: {described}")
    header = ["stage", "acting_e", "reason", "bit", "matches_A", "M_capital"]
    header += [f"G_{e}" for e in e_range] + [f"phi_{e}" for e in e_range]
    lines.append(",".join(header))
    for r in trace.records:
        row = [
            str(r.stage),
            str(r.acting),
            r.reason.value,
            str(r.bit),
            "true" if r.matches_oracle else "false",
            str(r.adversary),
        ]
        row += [str(g) for g in r.gamblers]
        row += [str(v) for v in r.opponents]
        lines.append(",".join(row))
    return lines


def write_trace_csv(trace: Trace, path: Union[str, Path]) -> None:
    """Write the trace CSV atomically (write-then-rename); byte-deterministic."""
    path = Path(path)
    payload = "\n".join(trace_csv_lines(trace)) + "\n"
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(payload)
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise
