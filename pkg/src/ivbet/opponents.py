"""Builtin opponent catalog and the line-based strategy spec format.

Spec files are UTF-8 text, one strategy per line:

    name kind key=value ...

Blank lines and ``#`` comments are ignored. Integers are decimal, bit
patterns are strings over {0,1}, and an opponent's index is its line order.

Catalog kinds:

* ``constant_bettor`` (k, guess, capital): wagers k on the guesser's
  prediction while capital >= k, otherwise wagers 0.
* ``saver`` (c): capital constantly c, never wagers.
* ``partial_after`` (d, capital): converges exactly on strings of length
  <= d, diverges beyond; never wagers on its domain.
* ``escalator`` (k0, capital, guess): wagers k0, doubles after each win,
  resets to k0 after each loss, always capped at current capital.
* ``copycat`` (oracle, capital): wagers 1 on the true next bit of its
  oracle. Against the engine run on the same oracle it mirrors the adversary
  and is never defeated; it is bundled to demonstrate exactly that caveat.
* ``table`` (sigma=value pairs, ``e`` for the empty string): explicit finite
  value table, diverging off the table. May be unfair on purpose; meant for
  adversarial and broken test cases.

Any kind accepts an optional ``fuel=N``: evaluation then diverges on inputs
longer than N bits, the budgeted stand-in for an undecidable convergence
question. Without fuel the strategy's divergence is declared, i.e. exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .core import BitString, Oracle, parse_oracle
from .martingale import Node, OpponentStrategy

__all__ = [
    "GUESSERS",
    "CATALOG_KINDS",
    "StrategySpec",
    "SpecError",
    "make_builtin",
    "parse_strategy_specs",
    "serialize_strategy_specs",
    "default_family_specs",
    "default_family",
]

GUESSERS = ("alternating", "all_zeros", "all_ones", "majority_of_history")
CATALOG_KINDS = ("constant_bettor", "saver", "partial_after", "escalator", "copycat", "table")


class SpecError(ValueError):
    """Raised for malformed strategy specs; carries a line number when known."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class StrategySpec:
    """One parsed spec line: a catalog kind plus its parameters."""

    name: str
    kind: str
    params: dict[str, object] = field(default_factory=dict)


def _predict(guess: str, depth: int, ones: int) -> int:
    if guess == "alternating":
        return depth % 2
    if guess == "all_zeros":
        return 0
    if guess == "all_ones":
        return 1
    # majority_of_history: majority bit of the string seen so far, ties -> 0
    zeros = depth - ones
    return 1 if ones > zeros else 0


def _settle(value: int, wager: int, predicted: int, bit: int) -> int:
    return value + wager if bit == predicted else value - wager


def _constant_bettor(k: int, guess: str, capital: int) -> tuple[Node, Callable]:
    def step(node: Node, bit: int) -> Node:
        ones = node.aux
        wager = k if node.value >= k else 0
        predicted = _predict(guess, node.depth, ones)
        return Node(_settle(node.value, wager, predicted, bit), node.depth + 1, ones + bit)

    return Node(capital, 0, 0), step


def _saver(c: int) -> tuple[Node, Callable]:
    def step(node: Node, bit: int) -> Node:
        return Node(node.value, node.depth + 1, None)

    return Node(c, 0, None), step


def _partial_after(d: int, capital: int) -> tuple[Node, Callable]:
    def step(node: Node, bit: int) -> Optional[Node]:
        if node.depth + 1 > d:
            return None
        return Node(node.value, node.depth + 1, None)

    return Node(capital, 0, None), step


def _escalator(k0: int, capital: int, guess: str) -> tuple[Node, Callable]:
    def step(node: Node, bit: int) -> Node:
        next_wager, ones = node.aux
        wager = min(next_wager, node.value)
        predicted = _predict(guess, node.depth, ones)
        won = bit == predicted
        value = node.value + wager if won else node.value - wager
        return Node(value, node.depth + 1, (2 * wager if won else k0, ones + bit))

    return Node(capital, 0, (k0, 0)), step


def _copycat(oracle: Oracle, capital: int) -> tuple[Node, Callable]:
    def step(node: Node, bit: int) -> Node:
        wager = 1 if node.value >= 1 else 0
        return Node(_settle(node.value, wager, oracle.bit(node.depth), bit), node.depth + 1, None)

    return Node(capital, 0, None), step


def _table(values: dict[BitString, int]) -> tuple[Optional[Node], Callable]:
    def step(node: Node, bit: int) -> Optional[Node]:
        sigma = node.aux.extend(bit)
        if sigma not in values:
            return None
        return Node(values[sigma], node.depth + 1, sigma)

    empty = BitString()
    root = Node(values[empty], 0, empty) if empty in values else None
    return root, step


def _fuel_bounded(step: Callable, fuel: int) -> Callable:
    def bounded(node: Node, bit: int) -> Optional[Node]:
        if node.depth + 1 > fuel:
            return None
        return step(node, bit)

    return bounded


def _want_int(spec: StrategySpec, key: str, minimum: int = 0) -> int:
    if key not in spec.params:
        raise SpecError(f"strategy {spec.name!r}: kind {spec.kind} needs parameter {key}")
    raw = spec.params[key]
    if not isinstance(raw, int):
        raise SpecError(f"strategy {spec.name!r}: parameter {key} must be an integer, got {raw!r}")
    if raw < minimum:
        raise SpecError(f"strategy {spec.name!r}: parameter {key} must be >= {minimum}, got {raw}")
    return raw


def _want_guess(spec: StrategySpec, key: str = "guess", default: Optional[str] = None) -> str:
    raw = spec.params.get(key, default)
    if raw is None:
        raise SpecError(f"strategy {spec.name!r}: kind {spec.kind} needs parameter {key}")
    if raw not in GUESSERS:
        raise SpecError(f"strategy {spec.name!r}: unknown guesser {raw!r} (one of {', '.join(GUESSERS)})")
    return raw  # type: ignore[return-value]


def make_builtin(spec: StrategySpec) -> OpponentStrategy:
    """Instantiate a catalog strategy from a spec. Raises SpecError on bad specs."""
    kind = spec.kind
    known = {"fuel"}
    if kind == "constant_bettor":
        known |= {"k", "guess", "capital"}
        root, step = _constant_bettor(
            _want_int(spec, "k", minimum=1), _want_guess(spec), _want_int(spec, "capital")
        )
    elif kind == "saver":
        known |= {"c"}
        root, step = _saver(_want_int(spec, "c"))
    elif kind == "partial_after":
        known |= {"d", "capital"}
        root, step = _partial_after(_want_int(spec, "d"), _want_int(spec, "capital"))
    elif kind == "escalator":
        known |= {"k0", "capital", "guess"}
        root, step = _escalator(
            _want_int(spec, "k0", minimum=1),
            _want_int(spec, "capital"),
            _want_guess(spec, default="all_ones"),
        )
    elif kind == "copycat":
        known |= {"oracle", "capital"}
        raw = spec.params.get("oracle")
        if isinstance(raw, Oracle):
            oracle = raw
        elif isinstance(raw, str):
            try:
                oracle = parse_oracle(raw)
            except ValueError as exc:
                raise SpecError(f"strategy {spec.name!r}: {exc}") from None
        else:
            raise SpecError(f"strategy {spec.name!r}: kind copycat needs parameter oracle")
        capital = _want_int(spec, "capital") if "capital" in spec.params else 1
        root, step = _copycat(oracle, capital)
    elif kind == "table":
        values: dict[BitString, int] = {}
        for key, raw in spec.params.items():
            if key == "fuel":
                continue
            known.add(key)
            sigma_text = "" if key == "e" else key
            try:
                sigma = BitString.from_str(sigma_text)
            except ValueError:
                raise SpecError(
                    f"strategy {spec.name!r}: table key must be a bit string or 'e', got {key!r}"
                ) from None
            if not isinstance(raw, int) or raw < 0:
                raise SpecError(f"strategy {spec.name!r}: table value for {key!r} must be a non-negative integer")
            values[sigma] = raw
        root, step = _table(values)
    else:
        raise SpecError(f"strategy {spec.name!r}: unknown kind {kind!r}")

    stray = set(spec.params) - known
    if stray:
        raise SpecError(f"strategy {spec.name!r}: unknown parameter(s) {sorted(stray)} for kind {kind}")

    flavor = "declared"
    if "fuel" in spec.params:
        fuel = _want_int(spec, "fuel")
        step = _fuel_bounded(step, fuel)
        if root is not None and root.depth > fuel:  # unreachable (root depth 0), kept for symmetry
            root = None
        flavor = f"fuel:{fuel}"
    return OpponentStrategy(name=spec.name, flavor=flavor, root=root, step=step)


def parse_strategy_specs(text: str) -> list[StrategySpec]:
    """Parse a spec document into StrategySpecs, preserving line order."""
    specs: list[StrategySpec] = []
    seen: set[str] = set()
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) < 2:
            raise SpecError(f"expected 'name kind key=value ...', got {line!r}", lineno)
        name, kind, *pairs = tokens
        if name in seen:
            raise SpecError(f"duplicate strategy name {name!r}", lineno)
        seen.add(name)
        if kind not in CATALOG_KINDS:
            raise SpecError(f"unknown kind {kind!r}", lineno)
        params: dict[str, object] = {}
        for pair in pairs:
            key, sep, value = pair.partition("=")
            if not sep or not key:
                raise SpecError(f"malformed parameter {pair!r} (expected key=value)", lineno)
            if key in params:
                raise SpecError(f"duplicate parameter {key!r}", lineno)
            params[key] = int(value) if _is_decimal(value) else value
        specs.append(StrategySpec(name=name, kind=kind, params=params))
    return specs


def _is_decimal(text: str) -> bool:
    if text.startswith("-"):
        return text[1:].isdigit()
    return text.isdigit()


def serialize_strategy_specs(specs: list[StrategySpec]) -> str:
    """Render specs back to the line format; parse(serialize(x)) == x."""
    lines = []
    for spec in specs:
        pairs = " ".join(f"{k}={v}" for k, v in spec.params.items())
        lines.append(f"{spec.name} {spec.kind} {pairs}".rstrip())
    return "\n".join(lines) + ("\n" if lines else "")


def default_family_specs() -> list[StrategySpec]:
    """The bundled default opponent family (cannot read the run's oracle).

    Ordered so every attention path fires: the partial strategy goes first
    (funded, hoarding, then stalling on its divergence frontier before the
    bettors monopolize the scan), the bettors exercise betting and
    bankruptcy, the saver exercises hoarding until matched.
    """
    return [
        StrategySpec("early_stop", "partial_after", {"d": 3, "capital": 4}),
        StrategySpec("bettor_alt", "constant_bettor", {"k": 1, "guess": "alternating", "capital": 4}),
        StrategySpec("doubler", "escalator", {"k0": 1, "capital": 6, "guess": "all_ones"}),
        StrategySpec("saver5", "saver", {"c": 5}),
        StrategySpec("bettor_maj", "constant_bettor", {"k": 2, "guess": "majority_of_history", "capital": 6}),
    ]


def default_family() -> list[OpponentStrategy]:
    return [make_builtin(spec) for spec in default_family_specs()]
