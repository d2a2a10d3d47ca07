import itertools
import threading

import pytest

from redset import hfset as hf
from redset.hfset import (
    HFCapError, binary_intersection, binary_union, cartesian_product,
    difference, empty, finite_set, intersection_of, is_ordinal, is_transitive,
    iterated_power, iterated_union, make_set, member, ordered_pair,
    ordinals_in, parse_hf, power_set, render_hf, s_minus, s_plus,
    sf_conditions, sigma, sigma2, sp_stage, subset, successor, tc, tuple_of,
    union_of, von_neumann_stage,
)

from conftest import random_hfset, random_transitive

E = empty()
ONE = make_set([E])


class TestInterning:
    def test_extensionality(self):
        assert make_set([E, E]) is make_set([E])

    def test_structural_equality_is_identity(self, rng):
        for _ in range(200):
            a = random_hfset(rng, 4)
            b = make_set(a.elements)
            assert a is b
            assert hash(a) == hash(b)

    def test_concurrent_interning(self):
        results = []

        def build():
            x = empty()
            for _ in range(6):
                x = make_set([x, empty()])
            results.append(x)

        threads = [threading.Thread(target=build) for _ in range(8)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert len({id(r) for r in results}) == 1


class TestBasics:
    def test_member(self):
        assert member(E, ONE)
        assert not member(ONE, E)

    def test_subset_empty(self, rng):
        for _ in range(100):
            assert subset(E, random_hfset(rng, 4))

    def test_union_of(self):
        a = make_set([ONE, make_set([ONE])])
        assert union_of(a) == make_set([E, ONE])

    def test_intersection_of(self):
        a = make_set([make_set([E, ONE]), ONE])
        assert intersection_of(a) is ONE

    def test_intersection_of_empty_rejected(self):
        with pytest.raises(ValueError):
            intersection_of(E)

    def test_binary_ops(self):
        two = make_set([E, ONE])
        assert binary_union(ONE, make_set([ONE])) == make_set([E, ONE])
        assert binary_intersection(two, ONE) is ONE
        assert difference(two, ONE) == make_set([ONE])

    def test_union_of_power_set(self, rng):
        for _ in range(100):
            t = random_hfset(rng, 3)
            assert union_of(power_set(t)) is t


class TestPowerSets:
    def test_power_empty(self):
        assert power_set(E) is ONE

    def test_iterated_power_counts(self):
        assert [len(iterated_power(E, k)) for k in range(6)] == [0, 1, 2, 4, 16, 65536]

    def test_cap(self):
        with pytest.raises(HFCapError):
            iterated_power(E, 6)

    def test_iterated_union(self):
        a = make_set([make_set([ONE])])
        assert iterated_union(a, 2) is ONE


class TestTransitiveClosure:
    def test_example(self):
        assert tc(make_set([ONE])) == make_set([ONE, E])

    def test_fixed_point_on_transitive(self, rng):
        for k in range(5):
            stage = von_neumann_stage(k)
            assert tc(stage) is stage
        for _ in range(100):
            t = random_transitive(rng, 4)
            assert tc(t) is t

    def test_not_self_member(self, rng):
        for _ in range(1000):
            a = random_hfset(rng, 5)
            assert not member(a, tc(a))
            assert subset(a, tc(a))

    def test_four_way_equivalence(self, rng):
        for _ in range(1000):
            a = random_hfset(rng, 5)
            conds = [
                is_transitive(a),
                subset(a, power_set(a)),
                subset(union_of(a), a),
                tc(a) is a,
            ]
            assert len(set(conds)) == 1

    def test_member_implies_distinct(self, rng):
        for _ in range(500):
            a = random_hfset(rng, 4)
            for b in a:
                assert b is not a


class TestSuccessorMaps:
    def test_ground(self):
        assert s_plus(E) is ONE
        assert s_minus(ONE) is E

    def test_round_trip(self, rng):
        for _ in range(1000):
            a = random_hfset(rng, 4)
            assert s_minus(s_plus(a)) is a

    def test_successor_vs_splus(self, rng):
        for _ in range(100):
            t = random_transitive(rng, 4)
            assert successor(t) is s_plus(t)
        nt = make_set([ONE])  # not transitive
        assert successor(nt) is not s_plus(nt)

    def test_regularity(self, rng):
        for _ in range(300):
            u = random_hfset(rng, 4)
            if len(u) == 0:
                continue
            assert any(len(binary_intersection(u, y)) == 0 for y in u)


class TestPairs:
    def test_ordered_pair_degenerate(self):
        assert ordered_pair(E, E) == make_set([ONE])

    def test_ordered_pair_injective(self, rng):
        for _ in range(1000):
            a, b, c, d = (random_hfset(rng, 2) for _ in range(4))
            if ordered_pair(a, b) is ordered_pair(c, d):
                assert a is c and b is d

    def test_product_cardinality(self, rng):
        for _ in range(50):
            a, b = random_hfset(rng, 3), random_hfset(rng, 3)
            assert len(cartesian_product(a, b)) == len(a) * len(b)

    def test_tuple(self):
        t = tuple_of([E, ONE, E])
        assert t == ordered_pair(ordered_pair(E, ONE), E)
        with pytest.raises(ValueError):
            tuple_of([E])

    def test_sigma(self):
        assert sigma(E) is ONE
        assert sigma2(E, E) is ONE
        assert finite_set([E, ONE, E]) == make_set([E, ONE])


class TestOrdinals:
    def test_examples(self):
        two = make_set([E, ONE])
        assert is_ordinal(two)
        assert not is_ordinal(make_set([ONE]))

    def test_ordinals_in_stages(self):
        for k in range(5):
            stage = von_neumann_stage(k)
            expected = E
            for _ in range(k):
                expected = successor(expected)
            assert ordinals_in(stage) is expected

    def test_ordinals_in_requires_transitive(self):
        with pytest.raises(ValueError):
            ordinals_in(make_set([ONE]))

    def test_one_new_ordinal_per_stage(self):
        for k in range(1, 6):
            a = ordinals_in(von_neumann_stage(k))
            b = ordinals_in(von_neumann_stage(k - 1))
            assert len(a) == len(b) + 1

    def test_ordinal_collection_lemma(self, rng):
        # gamma is an ordinal, and its successor collects the ordinals
        # among the subsets of the transitive carrier
        for _ in range(200):
            t = random_transitive(rng, 4, width=2)
            gamma = ordinals_in(t)
            assert is_ordinal(gamma)
            # ordinal subsets of t are exactly subsets of gamma
            candidates = [
                make_set(combo)
                for r in range(len(gamma) + 1)
                for combo in itertools.combinations(gamma.elements, r)
            ]
            via_subsets = make_set(a for a in candidates if is_ordinal(a))
            assert successor(gamma) is via_subsets

    def test_ordinal_subsets_against_full_power_set(self, rng):
        for _ in range(40):
            t = random_transitive(rng, 3, width=2)
            if len(t) > 8:
                continue
            gamma = ordinals_in(t)
            literal = make_set(a for a in power_set(t) if is_ordinal(a))
            assert successor(gamma) is literal


class TestSubsetFriendliness:
    def test_no_finite_set_is_subset_friendly(self, rng):
        for a in von_neumann_stage(4):
            assert not all(sf_conditions(a))
        for _ in range(10_000):
            a = random_hfset(rng, 6, width=2)
            assert not all(sf_conditions(a))

    def test_conditions_individually(self):
        two = make_set([E, ONE])
        c1, c2, c3, c4 = sf_conditions(two)
        assert c1 and c2 and not c3

    def test_absorption_at_stage_level(self):
        # if the power set of a member is itself a member, every subset of
        # that member is absorbed
        for k in range(2, 5):
            stage = von_neumann_stage(k)
            for m in stage:
                p = power_set(m)
                if member(p, stage):
                    for a in p:
                        assert member(a, stage)


class TestStages:
    def test_stage2(self):
        assert von_neumann_stage(2) == make_set([E, ONE])

    def test_stages_transitive_and_nested(self):
        for k in range(5):
            s = von_neumann_stage(k)
            assert is_transitive(s)
            assert subset(s, von_neumann_stage(k + 1))

    def test_stage_cap(self):
        with pytest.raises(HFCapError):
            von_neumann_stage(6)

    def test_sp_stage(self):
        a = make_set([ONE])
        assert sp_stage(a, 0) is tc(a)
        assert sp_stage(a, 1) is power_set(tc(a))


class TestLiterals:
    def test_parse_render(self):
        a = parse_hf("{{} {{}}}")
        assert a == make_set([E, ONE])
        assert render_hf(a) == "{{} {{}}}"

    def test_order_insensitive(self):
        assert parse_hf("{{{}} {}}") is parse_hf("{} {{}}".join(["{", "}"]))

    def test_bad_literal(self):
        with pytest.raises(ValueError):
            parse_hf("{{}")
