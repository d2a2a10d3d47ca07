"""Finite model evaluation over hereditarily-finite universes.

A Universe is a finite collection of HFSets with the true membership
relation.  eval_formula computes classical satisfaction with quantifiers
ranging over the universe; validity means truth under every assignment of
the free variables.  Extended-language terms get the canonical partial
set semantics (empty set, union, singleton, pair, power set); a term
whose value escapes the universe makes the formula undefined, and
undefinedness propagates Kleene-style.

axiom_report evaluates each requested schema in a universe and compares
the outcome against the prediction table PREDICTED: extensionality,
regularity and choice hold in every transitive stage, pairing and the
subset-friendly-set axiom fail at top ranks, and the subset and
replacement schemas hold for every payload because subsets and definable
images never raise rank.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence

from . import hfset as hf
from .hfset import HFSet
from .syntax import (
    All, And, App, Const, Eq, Ex, Formula, Iff, Imp, Mem, Not, Or, Pred,
    Term, Var,
    free_vars, parse_formula, render_formula,
)
from .schemas import Theory, instantiate_schema, rst

DEFAULT_BUDGET = 10_000_000


class BudgetError(ValueError):
    """The assignment space exceeds the evaluation budget."""


@dataclass(frozen=True)
class Universe:
    members: tuple[HFSet, ...]
    transitive: bool

    @property
    def size(self) -> int:
        return len(self.members)


def make_universe(members) -> Universe:
    uniq = {m.id: m for m in members}
    ordered = tuple(uniq[i] for i in sorted(uniq))
    ids = set(uniq)
    transitive = all(e.id in ids for m in ordered for e in m)
    return Universe(ordered, transitive)


def stage_universe(k: int) -> Universe:
    """Universe of the k-th finite cumulative stage."""
    return make_universe(hf.von_neumann_stage(k).elements)


Env = dict[Var, HFSet]


# ---------------------------------------------------------------------------
# Term semantics

def _canonical_apply(name: str, args: list[HFSet]) -> Optional[HFSet]:
    try:
        match name:
            case "un":
                return hf.union_of(args[0])
            case "sg":
                return hf.sigma(args[0])
            case "pr":
                return hf.sigma2(args[0], args[1])
            case "pw":
                return hf.power_set(args[0])
    except hf.HFCapError:
        return None
    return None


@dataclass(frozen=True)
class Interpretation:
    """Meanings for constants and function symbols beyond the built-ins."""

    constants: Mapping[str, HFSet] = field(default_factory=dict)
    functions: Mapping[str, Callable[..., Optional[HFSet]]] = field(default_factory=dict)


CANONICAL = Interpretation(constants={}, functions={})


def eval_term(u: Universe, t: Term, env: Env, interp: Interpretation = CANONICAL) -> Optional[HFSet]:
    """Value of t in the universe, or None if it escapes or is undefined."""
    match t:
        case Var():
            v = env.get(t)
            if v is None:
                raise ValueError(f"unbound variable {t}")
            return v
        case Const(name):
            if name == "O":
                v = hf.empty()
            else:
                v = interp.constants.get(name)
                if v is None:
                    return None
            return v if v.id in _ids(u) else None
        case App(name, args):
            vals = []
            for a in args:
                av = eval_term(u, a, env, interp)
                if av is None:
                    return None
                vals.append(av)
            fn = interp.functions.get(name)
            v = fn(*vals) if fn is not None else _canonical_apply(name, vals)
            if v is None:
                return None
            return v if v.id in _ids(u) else None
    raise TypeError(t)


_ids_cache: dict[tuple[int, ...], frozenset[int]] = {}


def _ids(u: Universe) -> frozenset[int]:
    key = tuple(m.id for m in u.members)
    hit = _ids_cache.get(key)
    if hit is None:
        hit = frozenset(key)
        _ids_cache[key] = hit
    return hit


# ---------------------------------------------------------------------------
# Formula semantics (strong-Kleene handling of undefined terms)

def eval_formula(
    u: Universe,
    f: Formula,
    env: Env,
    interp: Interpretation = CANONICAL,
) -> Optional[bool]:
    """Classical satisfaction; None marks an undefined (escaped) value."""

    def ev(g: Formula, e: Env) -> Optional[bool]:
        match g:
            case Eq(l, r):
                a, b = eval_term(u, l, e, interp), eval_term(u, r, e, interp)
                if a is None or b is None:
                    return None
                return a is b
            case Mem(l, r):
                a, b = eval_term(u, l, e, interp), eval_term(u, r, e, interp)
                if a is None or b is None:
                    return None
                return hf.member(a, b)
            case Pred("sub", (l, r)):
                a, b = eval_term(u, l, e, interp), eval_term(u, r, e, interp)
                if a is None or b is None:
                    return None
                return hf.subset(a, b)
            case Pred(name, _):
                raise ValueError(f"predicate {name} has no model semantics")
            case Not(b):
                v = ev(b, e)
                return None if v is None else not v
            case Imp(l, r):
                lv = ev(l, e)
                if lv is False:
                    return True
                rv = ev(r, e)
                if rv is True:
                    return True
                if lv is None or rv is None:
                    return None
                return rv
            case And(l, r):
                lv = ev(l, e)
                if lv is False:
                    return False
                rv = ev(r, e)
                if rv is False:
                    return False
                if lv is None or rv is None:
                    return None
                return True
            case Or(l, r):
                lv = ev(l, e)
                if lv is True:
                    return True
                rv = ev(r, e)
                if rv is True:
                    return True
                if lv is None or rv is None:
                    return None
                return False
            case Iff(l, r):
                lv, rv = ev(l, e), ev(r, e)
                if lv is None or rv is None:
                    return None
                return lv == rv
            case All(x, b):
                saw_undef = False
                for m in u.members:
                    e2 = dict(e)
                    e2[x] = m
                    v = ev(b, e2)
                    if v is False:
                        return False
                    if v is None:
                        saw_undef = True
                return None if saw_undef else True
            case Ex(x, b):
                saw_undef = False
                for m in u.members:
                    e2 = dict(e)
                    e2[x] = m
                    v = ev(b, e2)
                    if v is True:
                        return True
                    if v is None:
                        saw_undef = True
                return None if saw_undef else False
        raise TypeError(g)

    missing = free_vars(f) - set(env)
    if missing:
        raise ValueError(f"unbound free variables: {sorted(v.index for v in missing)}")
    return ev(f, env)


def eval_extended(u: Universe, f: Formula, env: Env) -> Optional[bool]:
    """eval_formula under the canonical term semantics."""
    return eval_formula(u, f, env, CANONICAL)


@dataclass(frozen=True)
class ValidityResult:
    valid: bool
    counterexample: Optional[tuple[tuple[Var, HFSet], ...]] = None
    checked: int = 0
    undefined: int = 0

    def witness_text(self) -> str:
        if self.counterexample is None:
            return ""
        return " ".join(
            f"x{v.index}={hf.render_hf(m)}" for v, m in self.counterexample
        )


def check_valid(
    u: Universe,
    f: Formula,
    budget: int = DEFAULT_BUDGET,
    interp: Interpretation = CANONICAL,
) -> ValidityResult:
    """Exhaustive validity: true under every assignment of free variables.

    Deterministic: assignments are enumerated in interned-id order, so the
    first counterexample found is stable.  Undefined instances count
    separately and block validity.
    """
    fv = sorted(free_vars(f), key=lambda v: v.index)
    total = u.size ** len(fv) if fv else 1
    if total > budget:
        raise BudgetError(f"{total} assignments exceed the budget {budget}")
    checked = 0
    undefined = 0
    env: Env = {}

    def assign(i: int) -> Optional[tuple[tuple[Var, HFSet], ...]]:
        nonlocal checked, undefined
        if i == len(fv):
            checked += 1
            v = eval_formula(u, f, env, interp)
            if v is True:
                return None
            if v is None:
                undefined += 1
            return tuple((x, env[x]) for x in fv)
        for m in u.members:
            env[fv[i]] = m
            bad = assign(i + 1)
            if bad is not None:
                return bad
        env.pop(fv[i], None)
        return None

    bad = assign(0)
    if bad is not None:
        return ValidityResult(False, bad, checked, undefined)
    return ValidityResult(True, None, checked, undefined)


# ---------------------------------------------------------------------------
# Axiom reports

# Expected validity of each schema in the finite stages (k >= 2).
# Pairing and the subset-friendly axiom need sets one rank above their
# parameters, which top-rank individuals do not have; everything else
# survives truncation.
PREDICTED: dict[str, bool] = {
    "A1": True,
    "A2": True,
    "A3": True,
    "A4": False,
    "A5": False,
    "A6": True,
    "Repl": True,
}

_CANONICAL_VARS = {
    "A1": (Var(1), Var(2), Var(3)),
    "A2": (Var(1), Var(2), Var(3)),
    "A3": (Var(1), Var(2), Var(3)),
    "A4": (Var(1), Var(2), Var(3)),
    "A5": tuple(Var(i) for i in range(1, 8)),
    "A6": tuple(Var(i) for i in range(1, 6)),
    "Repl": tuple(Var(i) for i in range(1, 6)),
}


def default_payload_sampler(seed: int, count: int, kind: str = "a2") -> list[Formula]:
    """Small random payload formulas for the subset/replacement schemas.

    Subset payloads speak about the member variable x3 (plus at most one
    free parameter x11 and a quantified x12); replacement payloads relate
    the schema's x1 and x2.  Both respect the schemas' side conditions.
    """
    rng = random.Random(seed)
    if kind == "a2":
        free_pool = [Var(3), Var(3), Var(11)]
    elif kind == "repl":
        free_pool = [Var(1), Var(2)]
    else:
        raise ValueError(f"unknown payload kind: {kind}")
    return [
        _random_payload(rng, rng.randint(0, 1), free_pool, Var(12))
        for _ in range(count)
    ]


def _random_payload(
    rng: random.Random, depth: int, pool: list[Var], bound: Var
) -> Formula:
    def atom(extra: Optional[Var] = None) -> Formula:
        opts = pool + ([extra] if extra else [])
        a, b = rng.choice(opts), rng.choice(opts)
        return Mem(a, b) if rng.random() < 0.75 else Eq(a, b)

    if depth == 0:
        return atom()
    match rng.randint(0, 5):
        case 0:
            return Not(_random_payload(rng, depth - 1, pool, bound))
        case 1:
            return And(_random_payload(rng, depth - 1, pool, bound), atom())
        case 2:
            return Or(_random_payload(rng, depth - 1, pool, bound), atom())
        case 3:
            return Imp(atom(), _random_payload(rng, depth - 1, pool, bound))
        case 4:
            return All(bound, atom(bound))
        case _:
            return Ex(bound, atom(bound))


@dataclass(frozen=True)
class SchemaReportRow:
    schema_id: str
    valid: bool
    predicted: bool
    detail: str = ""

    @property
    def matches_prediction(self) -> bool:
        return self.valid == self.predicted


def check_a2_payload_valid(
    u: Universe, payload: Formula, budget: int = DEFAULT_BUDGET
) -> ValidityResult:
    """Validity of the subset instance for one payload.

    The witness is constructed directly: for parameter value A, the set
    {y in A : payload} is a subset of A and hence stays in a transitive
    stage; the defining equivalence is then verified by evaluation with
    that witness plugged in.
    """
    uvar, xvar, yvar = Var(1), Var(2), Var(3)
    inst = instantiate_schema(rst(), "A2", (uvar, xvar, yvar), payload)
    matrix = inst.body  # all y iff mem y u and mem y x payload
    fv = sorted(free_vars(inst), key=lambda v: v.index)
    total = u.size ** len(fv) if fv else 1
    if total * u.size > budget:
        raise BudgetError(f"{total} assignments exceed the budget {budget}")
    checked = 0
    env: Env = {}

    def assign(i: int):
        nonlocal checked
        if i == len(fv):
            checked += 1
            a = env[xvar]
            chosen = []
            for y in a:
                e2 = dict(env)
                e2[yvar] = y
                if eval_formula(u, payload, e2) is True:
                    chosen.append(y)
            witness = hf.make_set(chosen)
            if witness.id not in _ids(u):
                return tuple((x, env[x]) for x in fv)
            e2 = dict(env)
            e2[uvar] = witness
            if eval_formula(u, matrix, e2) is not True:
                return tuple((x, env[x]) for x in fv)
            return None
        for m in u.members:
            env[fv[i]] = m
            bad = assign(i + 1)
            if bad is not None:
                return bad
        env.pop(fv[i], None)
        return None

    bad = assign(0)
    if bad is not None:
        return ValidityResult(False, bad, checked, 0)
    return ValidityResult(True, None, checked, 0)


def axiom_report(
    u: Universe,
    theory: Theory,
    schema_ids: Sequence[str],
    payload_count: int = 30,
    seed: int = 7,
    budget: int = DEFAULT_BUDGET,
) -> list[SchemaReportRow]:
    """Validity table with witnesses for the requested schemas."""
    rows = []
    for sid in schema_ids:
        if sid == "A2":
            payloads = default_payload_sampler(seed, payload_count, "a2")
            ok = True
            detail = f"payloads={len(payloads)}"
            for payload in payloads:
                res = check_a2_payload_valid(u, payload, budget)
                if not res.valid:
                    ok = False
                    detail = f"payload={render_formula(payload)} {res.witness_text()}"
                    break
            rows.append(SchemaReportRow(sid, ok, PREDICTED[sid], detail))
        elif sid == "Repl":
            payloads = default_payload_sampler(seed, payload_count, "repl")
            ok = True
            detail = f"payloads={len(payloads)}"
            for payload in payloads:
                inst = instantiate_schema(theory, sid, _CANONICAL_VARS[sid], payload)
                res = check_valid(u, inst, budget)
                if not res.valid:
                    ok = False
                    detail = f"payload={render_formula(payload)} {res.witness_text()}"
                    break
            rows.append(SchemaReportRow(sid, ok, PREDICTED[sid], detail))
        else:
            inst = instantiate_schema(theory, sid, _CANONICAL_VARS[sid])
            res = check_valid(u, inst, budget)
            detail = res.witness_text() if not res.valid else f"checked={res.checked}"
            rows.append(SchemaReportRow(sid, res.valid, PREDICTED.get(sid, True), detail))
    return rows


# ---------------------------------------------------------------------------
# Stock formulas used in reports and tests

def intersection_theorem_formula() -> Formula:
    """Nonempty sets have an intersection set."""
    return parse_formula(
        "imp ex x4 mem x4 x1"
        " ex x5 all x3 iff mem x3 x5 all x2 imp mem x2 x1 mem x3 x2"
    )


def inductive_set_formula() -> Formula:
    """There is a set containing the empty set and closed under successor."""
    return parse_formula(
        "ex x1 and ex x2 and mem x2 x1 all x3 not mem x3 x2"
        " all x2 imp mem x2 x1 ex x3 and mem x3 x1"
        " all x4 iff mem x4 x3 or mem x4 x2 eq x4 x2"
    )
