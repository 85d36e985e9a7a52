"""Adversary capital, fairness validation, wager classification, success."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ivbet.core import BitString, PeriodicOracle, SeededOracle, bits
from ivbet.martingale import (
    ValuednessKind,
    ViolationKind,
    adversary_as_strategy,
    adversary_capital,
    classify_valuedness,
    success_sup,
    validate_fairness,
)
from ivbet.opponents import StrategySpec, make_builtin


def reference_adversary(oracle, sigma):
    """The defining recurrence, written out stepwise as an independent check."""
    value = 1
    for position, bit in enumerate(sigma):
        if value < 1:
            value = 0
        elif bit == oracle.bit(position):
            value += 1
        else:
            value -= 1
    return value


class TestAdversaryCapital:
    def test_starts_at_one(self):
        assert adversary_capital(PeriodicOracle("01"), BitString()) == 1

    def test_matching_prefix_gains_one_per_bit(self):
        a = PeriodicOracle("01")
        assert adversary_capital(a, bits("010")) == 4
        assert adversary_capital(a, bits("010")) == reference_adversary(a, bits("010"))

    def test_wrong_first_bit_freezes_at_zero(self):
        a = PeriodicOracle("01")
        assert adversary_capital(a, bits("1")) == 0
        assert adversary_capital(a, bits("10")) == 0
        assert adversary_capital(a, bits("1000")) == 0

    @given(st.lists(st.integers(min_value=0, max_value=1), max_size=60), st.integers(0, 2**64 - 1))
    def test_agrees_with_reference_recurrence(self, values, seed):
        oracle = SeededOracle(seed)
        sigma = BitString(values)
        assert adversary_capital(oracle, sigma) == reference_adversary(oracle, sigma)

    @given(st.lists(st.integers(min_value=0, max_value=1), max_size=60), st.integers(0, 2**64 - 1))
    def test_steps_by_one_while_alive_then_freezes(self, values, seed):
        oracle = SeededOracle(seed)
        sigma = BitString(values)
        for n in range(len(sigma)):
            before = adversary_capital(oracle, sigma.restrict(n))
            after = adversary_capital(oracle, sigma.restrict(n + 1))
            if before >= 1:
                assert abs(after - before) == 1
            else:
                assert before == 0 and after == 0

    def test_fair_at_every_node_to_depth_12(self):
        # exhaustive walk: parent capital is the average of its children
        for descriptor in ("01", "1101"):
            oracle = PeriodicOracle(descriptor)

            def walk(sigma, value, depth):
                if depth == 0:
                    return
                children = []
                for b in (0, 1):
                    if value >= 1:
                        child = value + 1 if b == oracle.bit(len(sigma)) else value - 1
                    else:
                        child = 0
                    children.append(child)
                    walk(sigma.extend(b), child, depth - 1)
                assert 2 * value == children[0] + children[1]
                assert adversary_capital(oracle, sigma) == value

            walk(BitString(), 1, 12)


def table_strategy(mapping):
    params = {("e" if key == "" else key): value for key, value in mapping.items()}
    return make_builtin(StrategySpec("t", "table", params))


class TestValidateFairness:
    def test_fair_node_passes(self):
        s = table_strategy({"": 4, "0": 6, "1": 2})
        assert validate_fairness(s, 1).ok

    def test_unfair_node_flagged(self):
        s = table_strategy({"": 4, "0": 6, "1": 3})
        report = validate_fairness(s, 1)
        assert not report.ok
        assert report.violations[0].kind is ViolationKind.UNFAIR
        assert report.violations[0].sigma == BitString()

    def test_mixed_convergence_flagged(self):
        s = table_strategy({"": 5, "0": 5})  # child '1' diverges
        report = validate_fairness(s, 1)
        assert [v.kind for v in report.violations] == [ViolationKind.MIXED_CONVERGENCE]

    def test_symmetric_divergence_is_allowed(self):
        s = make_builtin(StrategySpec("p", "partial_after", {"d": 0, "capital": 3}))
        assert validate_fairness(s, 6).ok

    def test_depth_zero_checks_nothing(self):
        s = table_strategy({"": 4, "0": 6, "1": 3})
        assert validate_fairness(s, 0).ok

    def test_violation_depth_is_respected(self):
        # the unfair node sits at length 2, so scans of depth <= 2 stay clean
        s = table_strategy({"": 4, "0": 4, "1": 4, "00": 4, "01": 4, "000": 9, "001": 1})
        assert validate_fairness(s, 2).ok
        assert not validate_fairness(s, 3).ok


class TestClassifyValuedness:
    def test_adversary_is_single_valued_one(self):
        strategy = adversary_as_strategy(SeededOracle(5))
        result = classify_valuedness(strategy, 10)
        assert result.kind is ValuednessKind.SINGLE_VALUED
        assert result.single_value == 1
        assert result.wagers == frozenset({1})

    def test_constant_bettor_is_single_valued_k(self):
        s = make_builtin(StrategySpec("c", "constant_bettor", {"k": 3, "guess": "all_ones", "capital": 7}))
        result = classify_valuedness(s, 9)
        assert result.kind is ValuednessKind.SINGLE_VALUED
        assert result.single_value == 3

    def test_escalator_is_finite_valued(self):
        s = make_builtin(StrategySpec("d", "escalator", {"k0": 1, "capital": 6, "guess": "all_ones"}))
        result = classify_valuedness(s, 8)
        assert result.kind is ValuednessKind.FINITE_VALUED
        assert 1 in result.wagers and len(result.wagers) > 1

    def test_finite_wager_set_reported(self):
        s = table_strategy(
            {"": 4, "0": 5, "1": 3, "00": 7, "01": 3, "10": 6, "11": 0, "000": 10, "001": 4,
             "010": 6, "011": 0, "100": 9, "101": 3, "110": 0, "111": 0}
        )
        result = classify_valuedness(s, 3)
        assert result.kind is ValuednessKind.FINITE_VALUED
        assert result.wagers == frozenset({1, 2, 3})

    def test_never_wagering_reports_integer_floor_claim(self):
        s = make_builtin(StrategySpec("s", "saver", {"c": 5}))
        result = classify_valuedness(s, 10)
        assert result.kind is ValuednessKind.INTEGER_VALUED
        assert result.wagers == frozenset()

    def test_idling_above_the_minimum_forces_zero_into_the_set(self):
        # wagers 1 once, but also sits idle at capital 4: the set must contain 0
        s = table_strategy({"": 4, "0": 4, "1": 4, "00": 5, "01": 3, "10": 4, "11": 4})
        result = classify_valuedness(s, 2)
        assert result.kind is ValuednessKind.FINITE_VALUED
        assert result.wagers == frozenset({0, 1})

    def test_unfair_strategy_is_not_a_martingale(self):
        s = table_strategy({"": 4, "0": 6, "1": 3})
        result = classify_valuedness(s, 2)
        assert result.kind is ValuednessKind.NOT_A_MARTINGALE


class TestSuccessSup:
    def test_threshold_reached(self):
        assert success_sup([1, 2, 3, 2], 3) == (3, True)

    def test_threshold_missed(self):
        assert success_sup([1, 0, 0, 0], 2) == (1, False)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            success_sup([], 1)
