"""Betting strategies and the mechanically checkable facts about them.

A strategy assigns a non-negative integer capital to finite bit strings and
may be partial: evaluate() returns an int where the strategy converges and
None where it diverges. Divergence is downward-closed by construction (once a
prefix diverges, every extension does), which is what the incremental node
walk guarantees.

Fair play means the parent capital is the average of the two child capitals
wherever all three are defined. validate_fairness checks that exhaustively to
a depth; classify_valuedness reports the strongest wager-set class the
observed behaviour supports. Both reports are explicitly "to depth d": the
true class of an arbitrary strategy is not decidable from finitely many
queries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, NamedTuple, Optional, Sequence

from .core import BitString, Oracle

__all__ = [
    "Node",
    "OpponentStrategy",
    "adversary_capital",
    "ViolationKind",
    "Violation",
    "FairnessReport",
    "validate_fairness",
    "ValuednessKind",
    "Valuedness",
    "classify_valuedness",
    "success_sup",
    "adversary_as_strategy",
]


class Node(NamedTuple):
    """Evaluation state of a strategy at one string: capital, depth, rule state."""

    value: int
    depth: int
    aux: object


StepFn = Callable[[Node, int], Optional[Node]]


@dataclass(frozen=True)
class OpponentStrategy:
    """A deterministic, possibly partial, integer-capital betting strategy.

    The strategy is defined by a root node (state at the empty string; None if
    it already diverges there) and a pure step function mapping a node and a
    next bit to the child node, or None where the strategy diverges. flavor
    records how divergence is decided: "declared" strategies answer
    convergence exactly by definition; "fuel:N" strategies diverge once the
    input exceeds N bits, a budgeted approximation.
    """

    name: str
    flavor: str
    root: Optional[Node] = field(repr=False)
    step: StepFn = field(repr=False)

    def initial_node(self) -> Optional[Node]:
        return self.root

    def child_node(self, node: Optional[Node], bit: int) -> Optional[Node]:
        if node is None:
            return None
        return self.step(node, bit)

    def evaluate(self, sigma: BitString) -> Optional[int]:
        """Capital at sigma, or None where the strategy diverges."""
        node = self.root
        for b in sigma:
            if node is None:
                return None
            node = self.step(node, b)
        return None if node is None else node.value


def adversary_capital(oracle: Oracle, sigma: BitString) -> int:
    """Capital of the oracle-following adversary after betting through sigma.

    The adversary starts with 1 and wagers one quantum per bit that the next
    bit seen equals the oracle's bit at that position: +1 on a match, -1 on a
    miss, frozen at 0 once broke.
    """
    capital = 1
    for i, b in enumerate(sigma):
        if capital >= 1:
            capital = capital + 1 if b == oracle.bit(i) else capital - 1
        else:
            capital = 0
    return capital


class ViolationKind(Enum):
    UNFAIR = "unfair"                      # parent is not the average of the children
    MIXED_CONVERGENCE = "mixed_convergence"  # exactly one child converges
    INVALID_VALUE = "invalid_value"        # non-int or negative capital


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    sigma: BitString
    parent: Optional[int]
    child0: Optional[int]
    child1: Optional[int]

    def __str__(self) -> str:
        return (
            f"{self.kind.value} at '{self.sigma}': "
            f"parent={self.parent} children=({self.child0}, {self.child1})"
        )


@dataclass(frozen=True)
class FairnessReport:
    depth: int
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def _node_value(node: Optional[Node]) -> Optional[int]:
    return None if node is None else node.value


def _valid_capital(value: object) -> bool:
    return isinstance(value, int) and not isinstance(value, bool) and value >= 0


def validate_fairness(strategy: OpponentStrategy, depth: int) -> FairnessReport:
    """Exhaustively check fair play on every string shorter than depth.

    At each converging node with both children converging, the parent must be
    the exact average of the children. One converging child and one diverging
    child is flagged; symmetric divergence is allowed (the strategy is merely
    partial there). Capitals that are not non-negative ints are flagged too,
    though the builtin catalog cannot produce them.
    """
    if depth < 0:
        raise ValueError(f"depth must be >= 0, got {depth}")
    violations: list[Violation] = []
    # DFS over the binary tree of strings of length < depth.
    stack: list[tuple[BitString, Optional[Node]]] = [(BitString(), strategy.initial_node())]
    while stack:
        sigma, node = stack.pop()
        if len(sigma) >= depth:
            continue
        if node is None:
            continue  # diverged: all extensions diverge as well, nothing to check
        c0 = strategy.child_node(node, 0)
        c1 = strategy.child_node(node, 1)
        v, v0, v1 = node.value, _node_value(c0), _node_value(c1)
        for val in (v, v0, v1):
            if val is not None and not _valid_capital(val):
                violations.append(Violation(ViolationKind.INVALID_VALUE, sigma, v, v0, v1))
                break
        if (c0 is None) != (c1 is None):
            violations.append(Violation(ViolationKind.MIXED_CONVERGENCE, sigma, v, v0, v1))
        elif c0 is not None and c1 is not None and 2 * v != v0 + v1:
            violations.append(Violation(ViolationKind.UNFAIR, sigma, v, v0, v1))
        stack.append((sigma.extend(0), c0))
        stack.append((sigma.extend(1), c1))
    return FairnessReport(depth=depth, violations=tuple(violations))


class ValuednessKind(Enum):
    NOT_A_MARTINGALE = "not_a_martingale"
    GENERAL = "general"          # fair but non-integer; unreachable for int-valued strategies
    INTEGER_VALUED = "integer_valued"
    FINITE_VALUED = "finite_valued"
    SINGLE_VALUED = "single_valued"


@dataclass(frozen=True)
class Valuedness:
    """Strongest wager-set class supported by behaviour observed to a depth."""

    kind: ValuednessKind
    wagers: frozenset[int]
    single_value: Optional[int]
    depth: int

    def __str__(self) -> str:
        wagers = "{" + ", ".join(str(w) for w in sorted(self.wagers)) + "}"
        return f"{self.kind.value} wagers={wagers} (to depth {self.depth})"


def classify_valuedness(strategy: OpponentStrategy, depth: int) -> Valuedness:
    """Classify the wager sizes a strategy uses, from behaviour up to depth.

    Reports the strongest class that fits: a single wager size used whenever
    capital allows it, a finite wager set, or just integer-valued (always the
    floor claim, since wagering 0 is an integer wager). A strategy that fails
    fairness at this depth is rejected as not a martingale at all.

    Zero wagers are fine for a candidate set that excludes 0 only while
    capital is below the set's minimum; a zero wager at capital >= min forces
    0 into the set, which rules out a singleton.
    """
    report = validate_fairness(strategy, depth)
    if not report.ok:
        return Valuedness(ValuednessKind.NOT_A_MARTINGALE, frozenset(), None, depth)

    wagers: set[int] = set()
    richest_idle = -1  # largest capital seen at a zero-wager node
    stack: list[Optional[Node]] = [strategy.initial_node()]
    while stack:
        node = stack.pop()
        if node is None or node.depth >= depth:
            continue
        c0 = strategy.child_node(node, 0)
        c1 = strategy.child_node(node, 1)
        if c0 is not None and c1 is not None:
            wager = abs(node.value - c0.value)
            if wager:
                wagers.add(wager)
            else:
                richest_idle = max(richest_idle, node.value)
        stack.append(c0)
        stack.append(c1)

    if not wagers:
        return Valuedness(ValuednessKind.INTEGER_VALUED, frozenset(), None, depth)
    witness = set(wagers)
    if richest_idle >= min(wagers):
        witness.add(0)  # idled while able to bet: the wager set must allow 0
    if len(witness) == 1:
        (value,) = witness
        return Valuedness(ValuednessKind.SINGLE_VALUED, frozenset(witness), value, depth)
    return Valuedness(ValuednessKind.FINITE_VALUED, frozenset(witness), None, depth)


def success_sup(capitals: Sequence[int], threshold: int) -> tuple[int, bool]:
    """Supremum of a capital sequence and whether it reached a threshold.

    Finite proxy for success (capital growing without bound): report the
    largest capital seen and whether it got at least as high as threshold.
    """
    if not capitals:
        raise ValueError("capital sequence must be non-empty")
    sup = max(capitals)
    return sup, sup >= threshold


def adversary_as_strategy(oracle: Oracle, capital: int = 1, name: str = "adversary") -> OpponentStrategy:
    """The adversary bettor packaged as a strategy (wagers 1 on the oracle bit)."""
    if capital < 0:
        raise ValueError(f"capital must be >= 0, got {capital}")

    def step(node: Node, bit: int) -> Node:
        wager = 1 if node.value >= 1 else 0
        win = bit == oracle.bit(node.depth)
        return Node(node.value + wager if win else node.value - wager, node.depth + 1, None)

    return OpponentStrategy(name=name, flavor="declared", root=Node(capital, 0, None), step=step)
