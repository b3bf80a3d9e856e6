"""Configuration-sum verifier: evaluation, both summation routes, sweeps."""

import random
from fractions import Fraction

import pytest

from stirlingzero.algebra import ConsistencyError, MultiPoly
from stirlingzero.config_sums import (
    ConfigSumInstance,
    double_check_nonzero,
    evaluate,
    random_ground,
    sum_collapsed,
    sum_ordered,
    verify_range,
)
from stirlingzero.partitions import (
    Configuration,
    GroundSet,
    WeightedConfiguration,
    count_weighted_configs,
    unordered_partition_count,
)


def numeric_instance(g, w, values):
    return ConfigSumInstance.make(g, w, GroundSet.numeric(values))


def symbolic_instance(g, w):
    return ConfigSumInstance.make(g, w, GroundSet.symbolic(g))


class TestEvaluate:
    def test_two_block_example(self):
        # blocks {0},{1,2} with weights (0,1) at c=(2,3,4):
        # (+1)(1/2) * P_0(2) * P_1(7) = 21/2
        wc = WeightedConfiguration(Configuration(3, (0b001, 0b110)), (0, 1))
        assert evaluate(wc, GroundSet.numeric([2, 3, 4])) == Fraction(21, 2)

    def test_single_block_weight_zero(self):
        wc = WeightedConfiguration(Configuration(3, (0b111,)), (0,))
        assert evaluate(wc, GroundSet.numeric([5, 6, 7])) == -1

    def test_two_singletons(self):
        wc = WeightedConfiguration(Configuration(2, (0b01, 0b10)), (0, 0))
        assert evaluate(wc, GroundSet.numeric([9, -4])) == Fraction(1, 2)

    def test_symbolic_evaluation(self):
        wc = WeightedConfiguration(Configuration(2, (0b11,)), (0,))
        got = evaluate(wc, GroundSet.symbolic(2))
        assert got == MultiPoly.constant(-1)


class TestInstanceValidation:
    def test_parameter_ranges(self):
        with pytest.raises(ValueError):
            numeric_instance(1, 0, [3])
        with pytest.raises(ValueError):
            numeric_instance(3, 2, [1, 2, 3])  # w > g-2
        with pytest.raises(ValueError):
            numeric_instance(3, -1, [1, 2, 3])

    def test_ground_size_must_match(self):
        with pytest.raises(ValueError):
            ConfigSumInstance.make(3, 0, GroundSet.numeric([1, 2]))


class TestOrderedSum:
    def test_g2_symbolic_by_hand(self):
        # -P_0(c1+c2) + 1/2 + 1/2 = 0
        res = sum_ordered(symbolic_instance(2, 0))
        assert res.verdict == "zero"
        assert res.configurations_visited == 3

    def test_g3_numeric_by_hand(self):
        res = sum_ordered(numeric_instance(3, 0, [2, 3, 4]))
        assert res.total == 0
        assert res.configurations_visited == 13

    def test_g4_w2_random_integers(self):
        res = sum_ordered(numeric_instance(4, 2, [3, 7, -2, 11]))
        assert res.total == 0

    def test_visited_matches_closed_form(self):
        for g, w in [(2, 0), (3, 1), (4, 2), (5, 3)]:
            res = sum_ordered(numeric_instance(g, w, list(range(2, 2 + g))))
            assert res.configurations_visited == count_weighted_configs(g, w)


class TestCollapsedSum:
    def test_g3_visits_only_partitions(self):
        res = sum_collapsed(numeric_instance(3, 0, [2, 3, 4]))
        assert res.total == 0
        assert res.configurations_visited == 5

    def test_g2_collapse_factors(self):
        # -1 * P_0 + 1 * (P_0 * P_0) = 0 via (-1)^1 0! and (+1)^2 1!
        res = sum_collapsed(numeric_instance(2, 0, [4, 9]))
        assert res.total == 0
        assert res.configurations_visited == 2

    @pytest.mark.parametrize("g", [2, 3, 4, 5])
    def test_equals_ordered_numeric(self, g):
        rng = random.Random(100 + g)
        for w in range(g - 1):
            ground = random_ground(g, rng)
            inst = ConfigSumInstance.make(g, w, ground)
            assert sum_collapsed(inst).total == sum_ordered(inst).total

    @pytest.mark.parametrize("g", [2, 3, 4, 5])
    def test_equals_ordered_symbolic(self, g):
        for w in range(g - 1):
            inst = symbolic_instance(g, w)
            assert sum_collapsed(inst).total == sum_ordered(inst).total

    def test_parallel_equals_serial(self):
        inst = numeric_instance(6, 3, [2, 3, 5, 7, 11, 13])
        serial = sum_collapsed(inst, jobs=1)
        parallel = sum_collapsed(inst, jobs=4)
        assert serial.total == parallel.total
        assert serial.configurations_visited == parallel.configurations_visited
        assert parallel.configurations_visited == unordered_partition_count(6)

    def test_parallel_symbolic(self):
        inst = symbolic_instance(4, 1)
        assert sum_collapsed(inst, jobs=3).total == sum_collapsed(inst).total


class TestIdentityProperties:
    @pytest.mark.parametrize("g", [2, 3, 4, 5])
    def test_symbolic_sums_vanish(self, g):
        for w in range(g - 1):
            res = sum_collapsed(symbolic_instance(g, w))
            assert res.verdict == "zero", f"g={g} w={w}"

    def test_substitution_homomorphism(self):
        # symbolic total specialized at numbers equals the numeric total
        values = [Fraction(5, 3), Fraction(-2), Fraction(7), Fraction(1, 4)]
        for w in range(3):
            sym = sum_collapsed(symbolic_instance(4, w)).total
            num = sum_collapsed(numeric_instance(4, w, values)).total
            names = GroundSet.symbolic(4).names()
            assert sym.substitute(dict(zip(names, values))) == num

    def test_relabeling_invariance(self):
        rng = random.Random(42)
        base = random_ground(5, rng)
        shuffled = list(base.values)
        rng.shuffle(shuffled)
        for w in (0, 2, 3):
            a = sum_collapsed(ConfigSumInstance.make(5, w, base)).total
            b = sum_collapsed(
                ConfigSumInstance.make(5, w, GroundSet.numeric(shuffled))).total
            assert a == b == 0

    def test_noninteger_negative_grounds(self):
        values = [Fraction(-7, 2), Fraction(1, 3), Fraction(11, 5),
                  Fraction(-4), Fraction(9, 7)]
        for w in range(4):
            assert sum_collapsed(numeric_instance(5, w, values)).total == 0


class TestDoubleCheckProtocol:
    def test_nonzero_is_reverified_through_ordered_route(self, monkeypatch):
        inst = numeric_instance(3, 1, [2, 3, 4])
        real = sum_ordered(inst)
        calls = []

        def fake_ordered(instance):
            calls.append(instance)
            return real

        monkeypatch.setattr("stirlingzero.config_sums.sum_ordered", fake_ordered)
        conf = double_check_nonzero(inst, real.total, random.Random(1))
        assert calls == [inst]
        assert conf.ordered_agrees
        assert conf.second_ground is not None
        assert conf.second_total == 0  # identity holds at the fresh ground set

    def test_route_disagreement_is_an_engine_bug(self):
        inst = numeric_instance(3, 0, [2, 3, 4])
        with pytest.raises(ConsistencyError):
            double_check_nonzero(inst, Fraction(1, 7), random.Random(1))

    def test_symbolic_skips_second_ground(self):
        inst = symbolic_instance(2, 0)
        conf = double_check_nonzero(inst, sum_ordered(inst).total)
        assert conf.second_ground is None
        assert conf.second_also_nonzero is None


class TestVerifyRange:
    def test_small_sweep_all_zero(self):
        entries = verify_range(4, seed=3)
        assert len(entries) == 6  # (2,0) (3,0) (3,1) (4,0) (4,1) (4,2)
        assert all(e.status == "asserted" for e in entries)
        assert all(e.result.verdict == "zero" for e in entries)

    def test_numeric_band_has_seeds_recorded(self):
        entries = verify_range(6, symbolic_g_max=5,
                               numeric_samples={6: 2}, seed=11)
        numeric = [e for e in entries if e.mode == "numeric"]
        assert numeric and all(e.seed is not None for e in numeric)
        assert all(e.result.verdict == "zero" for e in numeric)

    def test_budget_exhaustion_marks_not_attempted(self):
        entries = verify_range(5, budget_seconds=0.0, seed=0)
        assert entries
        assert all(e.status == "not_attempted" for e in entries)
        assert all(e.result is None for e in entries)

    def test_reproducible_with_same_seed(self):
        a = verify_range(6, numeric_samples={6: 1}, seed=5)
        b = verify_range(6, numeric_samples={6: 1}, seed=5)
        grounds_a = [e.result.instance.ground for e in a if e.mode == "numeric"]
        grounds_b = [e.result.instance.ground for e in b if e.mode == "numeric"]
        assert grounds_a == grounds_b
