"""ivbet: exact-arithmetic simulator of an adversarial betting game.

An oracle-following adversary bets one quantum per bit while the engine
builds a binary sequence that defeats a prioritized family of integer-valued
opponent strategies. Everything is exact integer arithmetic; every finitely
checkable invariant of a run has a verifier in ivbet.verify.
"""

from .core import (
    BitString,
    ExtRatio,
    Oracle,
    PeriodicOracle,
    PrefixOracle,
    SeededOracle,
    bits,
    flip,
    parse_oracle,
    ratio_cmp,
)
from .martingale import (
    OpponentStrategy,
    Valuedness,
    ValuednessKind,
    adversary_as_strategy,
    adversary_capital,
    classify_valuedness,
    success_sup,
    validate_fairness,
)
from .opponents import (
    StrategySpec,
    SpecError,
    default_family,
    default_family_specs,
    make_builtin,
    parse_strategy_specs,
    serialize_strategy_specs,
)
from .construction import (
    Attention,
    StageRecord,
    Trace,
    build_sequence,
    choose_bit_against_bet,
    new_state,
    requires_attention,
    run_stage,
    update_activity,
    write_trace_csv,
)
from .verify import (
    DefeatReport,
    DefeatStatus,
    analyze_defeat,
    check_bookkeeping,
    check_conservation,
    check_follow_agreement,
    check_priority,
    check_ratio_monotonicity,
    sweep_follow_agreement,
    will_follow_oracle,
)

__version__ = "0.1.0"
