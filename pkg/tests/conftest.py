"""Shared generators for randomized checks.

Deterministic: everything derives from seeded random.Random instances,
so expected values frozen in the tests stay stable.
"""

from __future__ import annotations

import random

import pytest

from redset import hfset as hf
from redset.syntax import (
    All, And, App, Const, Eq, Ex, Formula, Iff, Imp, Mem, Not, Or, Pred,
    Term, Var,
)


def random_base_formula(rng: random.Random, depth: int = 3, max_var: int = 4) -> Formula:
    def var() -> Var:
        return Var(rng.randint(1, max_var))

    if depth == 0:
        return Mem(var(), var()) if rng.random() < 0.7 else Eq(var(), var())
    match rng.randint(0, 7):
        case 0:
            return Not(random_base_formula(rng, depth - 1, max_var))
        case 1:
            return Imp(random_base_formula(rng, depth - 1, max_var),
                       random_base_formula(rng, depth - 1, max_var))
        case 2:
            return And(random_base_formula(rng, depth - 1, max_var),
                       random_base_formula(rng, depth - 1, max_var))
        case 3:
            return Or(random_base_formula(rng, depth - 1, max_var),
                      random_base_formula(rng, depth - 1, max_var))
        case 4:
            return Iff(random_base_formula(rng, depth - 1, max_var),
                       random_base_formula(rng, depth - 1, max_var))
        case 5:
            return All(var(), random_base_formula(rng, depth - 1, max_var))
        case 6:
            return Ex(var(), random_base_formula(rng, depth - 1, max_var))
        case _:
            return random_base_formula(rng, depth - 1, max_var)


def random_ext_term(rng: random.Random, depth: int = 2, max_var: int = 3) -> Term:
    if depth == 0 or rng.random() < 0.45:
        return Var(rng.randint(1, max_var))
    match rng.randint(0, 4):
        case 0:
            return Const("O")
        case 1:
            return App("un", (random_ext_term(rng, depth - 1, max_var),))
        case 2:
            return App("sg", (random_ext_term(rng, depth - 1, max_var),))
        case 3:
            return App("pw", (random_ext_term(rng, depth - 1, max_var),))
        case _:
            return App("pr", (random_ext_term(rng, depth - 1, max_var),
                              random_ext_term(rng, depth - 1, max_var)))


def random_ext_formula(rng: random.Random, depth: int = 2, max_var: int = 3) -> Formula:
    def atom() -> Formula:
        a = random_ext_term(rng, rng.randint(0, 2), max_var)
        b = random_ext_term(rng, rng.randint(0, 2), max_var)
        match rng.randint(0, 2):
            case 0:
                return Mem(a, b)
            case 1:
                return Eq(a, b)
            case _:
                return Pred("sub", (a, b))

    if depth == 0:
        return atom()
    match rng.randint(0, 6):
        case 0:
            return Not(random_ext_formula(rng, depth - 1, max_var))
        case 1:
            return Imp(random_ext_formula(rng, depth - 1, max_var),
                       random_ext_formula(rng, depth - 1, max_var))
        case 2:
            return And(random_ext_formula(rng, depth - 1, max_var),
                       random_ext_formula(rng, depth - 1, max_var))
        case 3:
            return Or(random_ext_formula(rng, depth - 1, max_var), atom())
        case 4:
            return All(Var(rng.randint(1, max_var)),
                       random_ext_formula(rng, depth - 1, max_var))
        case 5:
            return Ex(Var(rng.randint(1, max_var)),
                      random_ext_formula(rng, depth - 1, max_var))
        case _:
            return atom()


def random_hfset(rng: random.Random, rank: int, width: int = 3) -> hf.HFSet:
    if rank == 0:
        return hf.empty()
    n = rng.randint(0, width)
    return hf.make_set(
        random_hfset(rng, rng.randint(0, rank - 1), width) for _ in range(n)
    )


def random_transitive(rng: random.Random, rank: int, width: int = 3) -> hf.HFSet:
    return hf.tc(random_hfset(rng, rank, width))


@pytest.fixture
def rng():
    return random.Random(20260810)
