"""Batch experiment runner.

Subcommands:

* ``run``: wire an oracle, an opponent family and a stage count into the
  engine; optionally write the trace CSV, render figures, verify the trace
  and print a summary.
* ``sublemma-sweep``: exhaustively check the bit-choice rule against the
  independent integer predicate over a bounded grid.

Exit codes: 0 success, 1 usage or I/O error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .construction import build_sequence, write_trace_csv
from .core import parse_oracle
from .martingale import OpponentStrategy
from .opponents import SpecError, StrategySpec, default_family, make_builtin, parse_strategy_specs
from .verify import (
    DefeatStatus,
    analyze_defeat,
    check_bookkeeping,
    check_conservation,
    check_follow_agreement,
    check_ratio_monotonicity,
    sweep_follow_agreement,
)

__all__ = ["RunConfig", "run_experiment", "run_sweep", "main"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY = 2


@dataclass(frozen=True)
class RunConfig:
    """Everything one run needs; mirrors the CLI flags."""

    oracle_descriptor: str
    opponents_path: str = "builtin:default"
    stages: int = 1000
    trace_out: Optional[str] = None
    verify: bool = False
    summary: bool = False
    window: Optional[int] = None
    plots_dir: Optional[str] = None


def _load_family(source: str, oracle) -> list[OpponentStrategy]:
    if source == "none":
        return []
    if source == "builtin:default":
        return default_family()
    if source == "builtin:copycat":
        # the caveat demo: a copycat on the run's own oracle mirrors the
        # adversary's bets and is never defeated
        return [make_builtin(StrategySpec("copycat", "copycat", {"oracle": oracle}))]
    try:
        text = Path(source).read_text(encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot read opponents file {source!r}: {exc}") from exc
    return [make_builtin(spec) for spec in parse_strategy_specs(text)]


def run_experiment(config: RunConfig) -> int:
    """Build, emit, verify and summarize one run; returns the exit code."""
    try:
        oracle = parse_oracle(config.oracle_descriptor)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        family = _load_family(config.opponents_path, oracle)
    except (OSError, SpecError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if config.stages < 0:
        print(f"error: stages must be >= 0, got {config.stages}", file=sys.stderr)
        return EXIT_USAGE
    if config.window is not None and config.window < 1:
        print(f"error: window must be >= 1, got {config.window}", file=sys.stderr)
        return EXIT_USAGE

    trace = build_sequence(oracle, family, config.stages)

    if config.trace_out is not None:
        try:
            write_trace_csv(trace, config.trace_out)
        except OSError as exc:
            print(f"error: cannot write trace: {exc}", file=sys.stderr)
            return EXIT_USAGE
        print(f"wrote trace: {config.trace_out}")

    if config.plots_dir is not None:
        from .plots import render_trace_figures

        try:
            for figure_path in render_trace_figures(trace, config.plots_dir):
                print(f"wrote figure: {figure_path}")
        except OSError as exc:
            print(f"error: cannot write figures: {exc}", file=sys.stderr)
            return EXIT_USAGE

    defeat = analyze_defeat(trace, family, window=config.window)

    failed = []
    if config.verify:
        checks = [
            ("conservation", check_conservation(trace, oracle=oracle)),
            ("bookkeeping", check_bookkeeping(trace)),
            ("ratio-monotonicity", check_ratio_monotonicity(trace)),
            ("follow-agreement", check_follow_agreement(trace)),
            (
                "defeat-analysis",
                all(o.final_value == 0 for o in defeat.outcomes if o.status is DefeatStatus.DEFEATED),
            ),
        ]
        for name, ok in checks:
            print(f"{'PASS' if ok else 'FAIL'} {name}")
            if not ok:
                failed.append(name)

    if config.summary:
        print(f"oracle: {trace.oracle_descriptor}")
        names = ", ".join(trace.opponent_names) if trace.opponent_names else "(none)"
        print(f"opponents: {trace.family_size} [{names}]")
        print(f"stages: {trace.stages}")
        final = trace.records[-1].adversary if trace.records else 1
        print(f"final adversary capital: {final}")
        matching = sum(1 for r in trace.records if r.matches_oracle)
        print(f"bits matching oracle: {matching}/{trace.stages}")
        for outcome in defeat.outcomes:
            print(f"  {outcome}")

    return EXIT_VERIFY if failed else EXIT_OK


def run_sweep(bound_gambler: int, bound_opponent: int, bound_wager: int) -> int:
    """Run the exhaustive agreement sweep and report; returns the exit code."""
    try:
        report = sweep_follow_agreement(bound_gambler, bound_opponent, bound_wager)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if report.ok:
        print(f"verified {report.cases} cases, 0 counterexamples")
        return EXIT_OK
    print(f"checked {report.cases} cases, {len(report.counterexamples)} counterexamples:")
    for g, phi, n, predicted, decided in report.counterexamples[:10]:
        print(f"  gambler={g} opponent={phi} wager={n}: predicted follow={predicted}, rule chose {decided}")
    if len(report.counterexamples) > 10:
        print(f"  ... and {len(report.counterexamples) - 10} more")
    return EXIT_VERIFY


class _Parser(argparse.ArgumentParser):
    """argparse parser whose usage errors exit with code 1, per the exit contract."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _build_parser() -> _Parser:
    parser = _Parser(prog="ivbet", description="adversarial betting-game simulator and verifier")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run_parser = sub.add_parser("run", help="build a sequence, trace it, verify it")
    run_parser.add_argument("--oracle", required=True, metavar="DESCRIPTOR",
                            help="oracle sequence: periodic:<pattern>, seed:<u64>, or prefix:<bits>:<fallback>")
    run_parser.add_argument("--opponents", default="builtin:default", metavar="SOURCE",
                            help="strategy spec file, builtin:default, builtin:copycat, or none")
    run_parser.add_argument("--stages", required=True, type=int, help="number of stages to run")
    run_parser.add_argument("--trace", default=None, metavar="PATH", help="write the trace CSV here")
    run_parser.add_argument("--verify", action="store_true", help="run the trace checks and report pass/fail")
    run_parser.add_argument("--summary", action="store_true", help="print capitals and per-opponent outcomes")
    run_parser.add_argument("--window", type=int, default=None, metavar="W",
                            help="trailing window for the undefeated judgement (default: 10%% of stages)")
    run_parser.add_argument("--plots", default=None, metavar="DIR", help="render figures into this directory")

    sweep_parser = sub.add_parser("sublemma-sweep", help="exhaustive bit-choice rule agreement check")
    sweep_parser.add_argument("bound_gambler", type=int, help="max gambler account value")
    sweep_parser.add_argument("bound_opponent", type=int, help="max opponent capital")
    sweep_parser.add_argument("bound_wager", type=int, help="max wager size")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    if args.command == "run":
        config = RunConfig(
            oracle_descriptor=args.oracle,
            opponents_path=args.opponents,
            stages=args.stages,
            trace_out=args.trace,
            verify=args.verify,
            summary=args.summary,
            window=args.window,
            plots_dir=args.plots,
        )
        return run_experiment(config)
    return run_sweep(args.bound_gambler, args.bound_opponent, args.bound_wager)


if __name__ == "__main__":
    sys.exit(main())
