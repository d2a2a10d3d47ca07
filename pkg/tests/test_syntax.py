import random

import pytest
from hypothesis import given, settings, strategies as st

from redset.model import eval_formula, stage_universe
from redset.syntax import (
    All, And, App, Const, Eq, Ex, Iff, Imp, Mem, Not, Or, Pred, Var,
    BASE, EXT, CollisionError, SyntaxError_,
    all_vars, free_vars, is_base, parse_formula, parse_term,
    render_formula, render_term, rename_bound, substitute, substitute_parallel,
)

from conftest import random_base_formula


x1, x2, x3, x5, x7, x9 = Var(1), Var(2), Var(3), Var(5), Var(7), Var(9)


class TestParsing:
    def test_variable(self):
        assert parse_term("x3") == Var(3)

    def test_extended_term(self):
        assert parse_term("pr(x1 sg(x2))", EXT) == App("pr", (x1, App("sg", (x2,))))

    def test_arity_mismatch(self):
        with pytest.raises(SyntaxError_, match="arity"):
            parse_term("un(x1 x2)", EXT)

    def test_unknown_symbol(self):
        with pytest.raises(SyntaxError_, match="unknown"):
            parse_term("foo", BASE)

    def test_empty_input(self):
        with pytest.raises(SyntaxError_, match="empty"):
            parse_term("")

    def test_trailing_tokens(self):
        with pytest.raises(SyntaxError_, match="trailing"):
            parse_formula("mem x1 x2 x3")

    def test_atom(self):
        assert parse_formula("mem x1 x2") == Mem(x1, x2)

    def test_extensionality_instance(self):
        f = parse_formula("imp all x3 iff mem x3 x1 mem x3 x2 eq x1 x2")
        assert f == Imp(All(x3, Iff(Mem(x3, x1), Mem(x3, x2))), Eq(x1, x2))

    def test_missing_subformula(self):
        with pytest.raises(SyntaxError_):
            parse_formula("imp mem x1")

    def test_bad_binder(self):
        with pytest.raises(SyntaxError_, match="variable"):
            parse_formula("all mem x1 x2 mem x1 x2")

    def test_predicate_atom(self):
        assert parse_formula("sub x1 x2", EXT) == Pred("sub", (x1, x2))


class TestRendering:
    def test_atom(self):
        assert render_formula(Mem(x1, x2)) == "mem x1 x2"

    def test_defined_constant_axiom(self):
        f = Iff(Eq(x1, Const("O")), All(x2, Not(Mem(x2, x1))))
        assert render_formula(f) == "iff eq x1 O all x2 not mem x2 x1"

    def test_round_trip_sampled(self):
        rng = random.Random(11)
        for _ in range(1000):
            f = random_base_formula(rng, depth=rng.randint(0, 4))
            assert parse_formula(render_formula(f)) == f

    @given(st.integers(0, 2**31))
    @settings(max_examples=200, deadline=None)
    def test_round_trip_property(self, seed):
        f = random_base_formula(random.Random(seed), depth=3)
        assert parse_formula(render_formula(f)) == f
        assert is_base(f)


class TestVariables:
    def test_free(self):
        assert free_vars(All(x2, Mem(x1, x2))) == {x1}

    def test_all(self):
        assert all_vars(All(x2, Mem(x1, x2))) == {x1, x2}

    def test_free_under_exists(self):
        f = Ex(x1, And(Mem(x1, x2), Mem(x1, x3)))
        assert free_vars(f) == {x2, x3}


class TestSubstitution:
    def test_basic(self):
        assert substitute(Mem(x1, x2), x1, x3) == Mem(x3, x2)

    def test_collision(self):
        with pytest.raises(CollisionError) as e:
            substitute(All(x2, Mem(x1, x2)), x1, Var(2))
        assert e.value.binder == x2

    def test_identity(self, rng):
        for _ in range(200):
            f = random_base_formula(rng)
            assert substitute(f, x1, Var(1)) == f

    def test_nonfree_unchanged(self, rng):
        for _ in range(200):
            f = random_base_formula(rng, max_var=3)
            assert substitute(f, x9, x2) == f

    def test_swap_round_trip(self, rng):
        done = 0
        while done < 200:
            f = random_base_formula(rng, max_var=3)
            if x9 in all_vars(f):
                continue
            g = substitute(f, x1, x9)
            assert substitute(g, x9, x1) == f
            done += 1

    def test_parallel_swap(self):
        f = parse_formula("sub x2 x1", EXT)
        body = parse_formula("all x3 imp mem x3 x1 mem x3 x2")
        swapped = substitute_parallel(body, {x1: x2, x2: x1})
        assert render_formula(swapped) == "all x3 imp mem x3 x2 mem x3 x1"

    def test_free_vars_after_substitution(self, rng):
        for _ in range(300):
            f = random_base_formula(rng, max_var=3)
            try:
                g = substitute(f, x1, x9)
            except CollisionError:
                continue
            if x1 in free_vars(f):
                assert free_vars(g) == (free_vars(f) - {x1}) | {x9}
            else:
                assert g == f


class TestRenameBound:
    def test_basic(self):
        assert rename_bound(All(x2, Mem(x1, x2)), x2, x5) == All(x5, Mem(x1, x5))

    def test_free_occurrences_untouched(self):
        f = And(Mem(x2, x1), All(x2, Mem(x2, x1)))
        out = rename_bound(f, x2, x7)
        assert out == And(Mem(x2, x1), All(x7, Mem(x7, x1)))

    def test_not_fresh(self):
        with pytest.raises(SyntaxError_, match="fresh"):
            rename_bound(All(x2, Mem(x1, x2)), x2, x1)

    def test_preserves_free_vars(self, rng):
        for _ in range(300):
            f = random_base_formula(rng, max_var=3)
            out = rename_bound(f, x2, x9)
            assert free_vars(out) == free_vars(f)

    def test_discharges_collision(self):
        renamed = rename_bound(All(x2, Mem(x1, x2)), x2, x9)
        out = substitute(renamed, x1, Var(2))
        assert out == All(x9, Mem(x2, x9))


class TestSemantics:
    """Substitution agrees with environment update on a finite stage."""

    def test_substitution_soundness_v3(self, rng):
        u3 = stage_universe(3)
        checked = 0
        while checked < 150:
            f = random_base_formula(rng, depth=2, max_var=3)
            t = Var(rng.randint(1, 3))
            try:
                g = substitute(f, x1, t)
            except CollisionError:
                continue
            env = {v: u3.members[rng.randrange(u3.size)] for v in free_vars(f) | free_vars(g) | {t}}
            shifted = dict(env)
            shifted[x1] = env[t]
            assert eval_formula(u3, g, env) == eval_formula(u3, f, shifted)
            checked += 1

    def test_rename_then_substitute_equivalence(self):
        u3 = stage_universe(3)
        original = All(x2, Mem(x1, x2))
        fixed = substitute(rename_bound(original, x2, x9), x1, Var(2))
        assert fixed == All(x9, Mem(x2, x9))
        for m in u3.members:
            env = {x2: m}
            want = all(
                eval_formula(u3, Mem(x2, Var(4)), {x2: m, Var(4): w})
                for w in u3.members
            )
            assert eval_formula(u3, fixed, env) == want
