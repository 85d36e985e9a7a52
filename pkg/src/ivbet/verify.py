"""Independent checks over runs: an exact predicate for the bit-choice rule,
an exhaustive agreement sweep, and trace validators for conservation,
quantum bookkeeping, ratio monotonicity and opponent defeat.

Everything here is a pure function over an immutable trace. The predicate
deliberately uses integer cross-multiplication, not the extended-ratio code
path it cross-checks, so the two sides of the sweep stay independent.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence

from .core import ExtRatio, Oracle, flip, parse_oracle, ratio_cmp
from .construction import (
    Attention,
    ConstructionState,
    Trace,
    _advance,
    choose_bit_against_bet,
    new_state,
    refresh_activity,
    requires_attention,
)
from .martingale import OpponentStrategy

__all__ = [
    "will_follow_oracle",
    "SweepReport",
    "sweep_follow_agreement",
    "StageCounters",
    "compute_stage_counters",
    "check_conservation",
    "check_bookkeeping",
    "check_ratio_monotonicity",
    "check_follow_agreement",
    "check_priority",
    "DefeatStatus",
    "OpponentOutcome",
    "DefeatReport",
    "analyze_defeat",
]


def will_follow_oracle(gambler: int, opponent: int, wager: int) -> bool:
    """Predict whether the engine copies the oracle bit against a bet on it.

    When the acting opponent wagers `wager` on the oracle's next bit, the
    engine copies that bit exactly when gambler/opponent < 1/wager, i.e.
    wager * gambler < opponent, evaluated as exact integers with no division.
    This is the brute predicate the ratio-comparison rule must agree with.
    """
    if gambler < 1:
        raise ValueError(f"gambler must be >= 1, got {gambler}")
    if wager < 1:
        raise ValueError(f"wager must be >= 1, got {wager}")
    if wager > opponent:
        raise ValueError(f"a fair integer wager cannot exceed capital ({wager} > {opponent})")
    return wager * gambler < opponent


@dataclass(frozen=True)
class SweepReport:
    cases: int
    counterexamples: tuple[tuple[int, int, int, bool, bool], ...]  # (g, phi, n, predicted, decided)

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def sweep_follow_agreement(
    bound_gambler: int,
    bound_opponent: int,
    bound_wager: int,
    decision: Callable[[int, int, int], bool] = choose_bit_against_bet,
) -> SweepReport:
    """Exhaustively compare the bit-choice rule with the integer predicate.

    Enumerates every gambler value g in 1..bound_gambler, opponent capital
    phi in 1..bound_opponent and wager n in 1..min(phi, bound_wager), with
    the opponent betting n on the oracle bit (children phi+n / phi-n), and
    records any case where decision(g, phi+n, phi-n) disagrees with
    will_follow_oracle(g, phi, n). The decision function is injectable so
    broken comparators can be exercised deliberately.
    """
    if bound_gambler < 1 or bound_opponent < 1 or bound_wager < 1:
        raise ValueError("sweep bounds must all be >= 1")
    cases = 0
    bad: list[tuple[int, int, int, bool, bool]] = []
    for g in range(1, bound_gambler + 1):
        for phi in range(1, bound_opponent + 1):
            for n in range(1, min(phi, bound_wager) + 1):
                cases += 1
                predicted = will_follow_oracle(g, phi, n)
                decided = decision(g, phi + n, phi - n)
                if predicted != decided:
                    bad.append((g, phi, n, predicted, decided))
    return SweepReport(cases=cases, counterexamples=tuple(bad))


@dataclass(frozen=True)
class StageCounters:
    """Per-opponent tallies over the stages where its gambler moved."""

    both_up: int = 0     # gambler and opponent value both increased
    both_down: int = 0   # both decreased
    g_only_up: int = 0   # gambler up while the opponent value did not increase

    @property
    def total_changes(self) -> int:
        return self.both_up + self.both_down + self.g_only_up

    @property
    def net(self) -> int:
        return self.both_up - self.both_down + self.g_only_up


def _scan_bookkeeping(trace: Trace) -> tuple[bool, dict[int, StageCounters]]:
    """Walk the trace once, classifying every gambler move; False on any
    malformed move (more than one account changed, a jump bigger than one
    quantum, or a decrease without a matching opponent decrease)."""
    size = trace.family_size
    counts: dict[int, list[int]] = {}
    running: dict[int, int] = {}
    funded_virtual: set[int] = set()
    prev_gamblers = (0,) * size
    prev_opponents = trace.initial_opponents
    for record in trace.records:
        if len(record.gamblers) != size or len(record.opponents) != size:
            return False, {}
        changed = [i for i in range(size) if record.gamblers[i] != prev_gamblers[i]]
        e = record.acting
        if e < size:
            if changed != [e]:
                return False, {}
            delta = record.gamblers[e] - prev_gamblers[e]
            if delta not in (1, -1):
                return False, {}
            before, after = prev_opponents[e], record.opponents[e]
            numeric = isinstance(before, int) and isinstance(after, int)
            tally = counts.setdefault(e, [0, 0, 0])
            if delta == 1:
                if numeric and after > before:
                    tally[0] += 1
                else:
                    tally[2] += 1
            else:
                if numeric and after < before:
                    tally[1] += 1
                else:
                    return False, {}  # a gambler loss must come from a losing opponent bet
        else:
            if changed:
                return False, {}
            if e in funded_virtual:
                return False, {}  # an index beyond the family is funded at most once
            funded_virtual.add(e)
            delta = 1
            counts.setdefault(e, [0, 0, 0])[2] += 1
        running[e] = running.get(e, 0) + delta
        expected = record.gamblers[e] if e < size else 1
        if running[e] != expected:
            return False, {}
        w, l, k = counts[e]
        if running[e] != w - l + k:
            return False, {}
        prev_gamblers = record.gamblers
        prev_opponents = record.opponents
    counters = {e: StageCounters(w, l, k) for e, (w, l, k) in counts.items()}
    return True, counters


def check_bookkeeping(trace: Trace) -> bool:
    """True iff every stage moves exactly one gambler by exactly one quantum
    and the up/down/grant tallies reconstruct every gambler trajectory."""
    ok, _ = _scan_bookkeeping(trace)
    return ok


def compute_stage_counters(trace: Trace) -> dict[int, StageCounters]:
    """Final per-index counters for a well-formed trace."""
    ok, counters = _scan_bookkeeping(trace)
    if not ok:
        raise ValueError("trace fails bookkeeping; counters undefined")
    return counters


def check_conservation(trace: Trace, oracle: Optional[Oracle] = None) -> bool:
    """True iff every row satisfies adversary = 1 + sum of all gamblers and
    adversary >= 1, with the adversary capital independently recomputed from
    the chosen bits.

    The oracle is reparsed from the trace descriptor (or passed explicitly);
    if neither is available the recomputation falls back to the recorded
    match flags, which still pins the capital column to the bit column.
    """
    if oracle is None:
        try:
            oracle = parse_oracle(trace.oracle_descriptor)
        except ValueError:
            oracle = None
    size = trace.family_size
    capital = 1
    virtual_total = 0
    for i, record in enumerate(trace.records):
        matches = record.matches_oracle
        if oracle is not None and matches != (record.bit == oracle.bit(i)):
            return False
        if capital >= 1:
            capital = capital + 1 if matches else capital - 1
        else:
            capital = 0
        if record.adversary != capital or record.adversary < 1:
            return False
        if record.acting >= size:
            virtual_total += 1
        if record.adversary != 1 + sum(record.gamblers) + virtual_total:
            return False
    return True


def _numeric(value: object) -> bool:
    return isinstance(value, int)


def check_ratio_monotonicity(trace: Trace) -> bool:
    """True iff on every betting row the acting gambler/opponent ratio did not
    decrease, under extended-ratio comparison (0 denominators are infinite)."""
    size = trace.family_size
    prev_gamblers = (0,) * size
    prev_opponents = trace.initial_opponents
    for record in trace.records:
        if record.reason is Attention.BETTING:
            e = record.acting
            if e >= size:
                return False
            before_phi, after_phi = prev_opponents[e], record.opponents[e]
            if not (_numeric(before_phi) and _numeric(after_phi)):
                return False
            before = ExtRatio(prev_gamblers[e], before_phi)
            after = ExtRatio(record.gamblers[e], after_phi)
            if ratio_cmp(after, before) < 0:
                return False
        prev_gamblers = record.gamblers
        prev_opponents = record.opponents
    return True


def check_follow_agreement(trace: Trace) -> bool:
    """True iff every betting decision in the trace matches the predicate.

    On rows where the opponent bet on the oracle's bit, the chosen bit must
    match will_follow_oracle; on rows where it bet against, the engine must
    have copied the oracle (that direction is always strictly better).
    """
    size = trace.family_size
    prev_gamblers = (0,) * size
    prev_opponents = trace.initial_opponents
    for record in trace.records:
        if record.reason is Attention.BETTING:
            e = record.acting
            if e >= size:
                return False
            before_phi, after_phi = prev_opponents[e], record.opponents[e]
            if not (_numeric(before_phi) and _numeric(after_phi)):
                return False
            wager = abs(after_phi - before_phi)
            if wager == 0:
                return False  # a betting row must carry a real wager
            bet_on_oracle = (after_phi > before_phi) == record.matches_oracle
            try:
                if bet_on_oracle:
                    if record.matches_oracle != will_follow_oracle(prev_gamblers[e], before_phi, wager):
                        return False
                elif not record.matches_oracle:
                    return False
            except ValueError:
                return False
        prev_gamblers = record.gamblers
        prev_opponents = record.opponents
    return True


def check_priority(trace: Trace, oracle: Oracle, family: Sequence[OpponentStrategy]) -> bool:
    """Replay the trace against fresh strategies and confirm every row acted
    for the least index needing attention, with the bit the rule dictates."""
    if tuple(s.name for s in family) != trace.opponent_names:
        raise ValueError("family does not match trace")
    state: ConstructionState = new_state(oracle, family)
    size = len(state.family)
    for record in trace.records:
        refresh_activity(state)
        for d in range(min(record.acting, size)):
            if requires_attention(state, d) is not None:
                return False
        if record.acting >= size:
            if record.acting != state.next_fresh:
                return False
            reason: Optional[Attention] = Attention.UNFUNDED
        else:
            reason = requires_attention(state, record.acting)
        if reason is not record.reason:
            return False
        oracle_bit = oracle.bit(state.stage)
        if reason is Attention.BETTING:
            c0, c1 = state.frontier[record.acting]
            followed, defied = (c0, c1) if oracle_bit == 0 else (c1, c0)
            follow = choose_bit_against_bet(state.gambler(record.acting), followed.value, defied.value)
            expected_bit = oracle_bit if follow else flip(oracle_bit)
        else:
            expected_bit = oracle_bit
        if record.bit != expected_bit:
            return False
        replayed = _advance(state, record.acting, reason, record.bit)
        if replayed != record:
            return False
    return True


class DefeatStatus(Enum):
    DEFEATED = "defeated"      # capital along the sequence was driven to 0
    SETTLED = "settled"        # stopped betting well before the end
    UNDEFEATED = "undefeated"  # still wagering inside the trailing window


@dataclass(frozen=True)
class OpponentOutcome:
    name: str
    status: DefeatStatus
    last_bet_stage: Optional[int]
    sup_capital: int
    final_value: Optional[int]

    def __str__(self) -> str:
        last = "never" if self.last_bet_stage is None else f"stage {self.last_bet_stage}"
        return f"{self.name}: {self.status.value} (last bet {last}, sup capital {self.sup_capital})"


@dataclass(frozen=True)
class DefeatReport:
    outcomes: tuple[OpponentOutcome, ...]
    window: int
    stages: int

    @property
    def all_stopped(self) -> bool:
        return all(o.status is not DefeatStatus.UNDEFEATED for o in self.outcomes)


def analyze_defeat(
    trace: Trace,
    family: Optional[Sequence[OpponentStrategy]] = None,
    window: Optional[int] = None,
) -> DefeatReport:
    """Classify every real opponent from its value trajectory along the run.

    Defeated means its capital along the sequence ended at 0; undefeated
    means it still wagered within the last `window` stages (default 10% of
    the run); settled covers the rest, opponents that simply stopped betting.
    Whether an opponent would ever bet again is not decidable from a finite
    trace, so undefeated is a trailing-window judgement by design.
    """
    if family is not None and tuple(s.name for s in family) != trace.opponent_names:
        raise ValueError("family does not match trace")
    stages = trace.stages
    if window is None:
        window = max(1, stages // 10)
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    outcomes = []
    for e in range(trace.family_size):
        series = trace.opponent_series(e)
        numeric_values = [v for v in series if _numeric(v)]
        sup = max(numeric_values, default=0)
        final_value = numeric_values[-1] if numeric_values else None
        last_bet: Optional[int] = None
        for i in range(1, len(series)):
            before, after = series[i - 1], series[i]
            if _numeric(before) and _numeric(after) and after != before:
                last_bet = i  # value settled at prefix length i, i.e. stage i
        initial = series[0]
        if _numeric(initial) and initial > 0 and final_value == 0:
            status = DefeatStatus.DEFEATED
        elif last_bet is not None and last_bet > stages - window:
            status = DefeatStatus.UNDEFEATED
        else:
            status = DefeatStatus.SETTLED
        outcomes.append(
            OpponentOutcome(
                name=trace.opponent_names[e],
                status=status,
                last_bet_stage=last_bet,
                sup_capital=sup,
                final_value=final_value,
            )
        )
    return DefeatReport(outcomes=tuple(outcomes), window=window, stages=stages)
