"""Hilbert-style proof checking with proof-producing derived rules.

A Proof is a numbered list of (formula, justification) steps over a
Theory.  Primitive justifications are the logical axioms, schema
instances, named basis axioms, and the rules: modus ponens, generalization,
collision-free substitution and bound renaming.  Every Derived step
elaborates into primitive steps that are checked on the spot, so the
trusted core stays small.

The logical axioms are: propositional tautologies (truth-table over the
propositional skeleton), forall-instantiation, the quantifier
distribution axiom, the exists/forall duality, and reflexivity plus
one-occurrence congruence for equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

from . import schemas as _schemas
from .syntax import (
    All, And, App, Const, Eq, Ex, Formula, Iff, Imp, Mem, Not, Or, Pred,
    Term, Var,
    CollisionError, SyntaxError_,
    all_vars, binders, check_formula, check_term,
    free_vars, fresh_var, freshen_bound, render_formula,
    subformula_at, substitute,
)
from .schemas import SchemaError, Theory, instantiate_schema

TAUT_LETTER_CAP = 24


class KernelError(ValueError):
    """A derived rule or proof transformation could not be carried out."""


# ---------------------------------------------------------------------------
# Justifications

@dataclass(frozen=True)
class Taut:
    pass


@dataclass(frozen=True)
class AxSubst:
    var: Var
    term: Term


@dataclass(frozen=True)
class AxQDist:
    pass


@dataclass(frozen=True)
class AxExDef:
    pass


@dataclass(frozen=True)
class AxEqRefl:
    pass


@dataclass(frozen=True)
class AxEqCongr:
    predicate: str


@dataclass(frozen=True)
class Schema:
    schema_id: str
    variables: tuple[Var, ...]
    payload: Optional[Formula] = None


@dataclass(frozen=True)
class Basis:
    name: str


@dataclass(frozen=True)
class MP:
    premise: int
    implication: int


@dataclass(frozen=True)
class Gen:
    var: Var
    premise: int


@dataclass(frozen=True)
class Subst:
    premise: int
    var: Var
    term: Term


@dataclass(frozen=True)
class Rename:
    premise: int
    old: Var
    fresh: Var


@dataclass(frozen=True)
class Derived:
    rule: str
    premises: tuple[int, ...] = ()


Justification = Union[
    Taut, AxSubst, AxQDist, AxExDef, AxEqRefl, AxEqCongr,
    Schema, Basis, MP, Gen, Subst, Rename, Derived,
]

AXIOM_JUSTIFICATIONS = (Taut, AxSubst, AxQDist, AxExDef, AxEqRefl, AxEqCongr, Schema, Basis)


@dataclass(frozen=True)
class Step:
    formula: Formula
    just: Justification


@dataclass(frozen=True)
class Proof:
    theory: Theory
    steps: tuple[Step, ...]


@dataclass(frozen=True)
class Verdict:
    ok: bool
    first_failure: Optional[tuple[int, str]] = None


# ---------------------------------------------------------------------------
# Tautology checking over the propositional skeleton

class TautologyCapError(KernelError):
    pass


def _skeleton(f: Formula, letters: dict[Formula, int]):
    match f:
        case Not(b):
            return ("n", _skeleton(b, letters))
        case Imp(l, r):
            return ("i", _skeleton(l, letters), _skeleton(r, letters))
        case And(l, r):
            return ("a", _skeleton(l, letters), _skeleton(r, letters))
        case Or(l, r):
            return ("o", _skeleton(l, letters), _skeleton(r, letters))
        case Iff(l, r):
            return ("e", _skeleton(l, letters), _skeleton(r, letters))
        case _:
            # atoms and quantified subformulas are opaque letters
            if f not in letters:
                letters[f] = len(letters)
            return ("L", letters[f])


_taut_cache: dict[object, bool] = {}


def _eval_shape(shape, cols: list[int], ones: int) -> int:
    match shape:
        case ("L", i):
            return cols[i]
        case ("n", s):
            return _eval_shape(s, cols, ones) ^ ones
        case ("i", a, b):
            return (_eval_shape(a, cols, ones) ^ ones) | _eval_shape(b, cols, ones)
        case ("a", a, b):
            return _eval_shape(a, cols, ones) & _eval_shape(b, cols, ones)
        case ("o", a, b):
            return _eval_shape(a, cols, ones) | _eval_shape(b, cols, ones)
        case ("e", a, b):
            return (_eval_shape(a, cols, ones) ^ _eval_shape(b, cols, ones)) ^ ones
    raise TypeError(shape)


def is_tautology(f: Formula) -> bool:
    """Truth-table check of f's propositional skeleton."""
    letters: dict[Formula, int] = {}
    shape = _skeleton(f, letters)
    n = len(letters)
    if n > TAUT_LETTER_CAP:
        raise TautologyCapError(
            f"propositional skeleton has {n} letters, cap is {TAUT_LETTER_CAP}"
        )
    hit = _taut_cache.get(shape)
    if hit is not None:
        return hit
    rows = 1 << n
    ones = (1 << rows) - 1
    cols = []
    for i in range(n):
        run = 1 << i
        block = ((1 << run) - 1) << run
        period = run * 2
        col = 0
        for off in range(0, rows, period):
            col |= block << off
        cols.append(col)
    result = _eval_shape(shape, cols, ones) == ones
    if len(_taut_cache) < 65536:
        _taut_cache[shape] = result
    return result


# ---------------------------------------------------------------------------
# Logical axiom recognition

def infer_subst_term(g: Formula, x: Var, h: Formula) -> Optional[Term]:
    """Find t with substitute(g, x, t) == h, if one exists."""

    class Mismatch(Exception):
        pass

    found: list[Term] = []

    def go_t(a: Term, b: Term, active: bool):
        if not active:
            if a != b:
                raise Mismatch
            return
        match a:
            case Var() if a == x:
                found.append(b)
            case Var() | Const():
                if a != b:
                    raise Mismatch
            case App(n, args):
                if not isinstance(b, App) or b.name != n or len(b.args) != len(args):
                    raise Mismatch
                for p, q in zip(args, b.args):
                    go_t(p, q, active)

    def go_f(a: Formula, b: Formula, active: bool):
        match a, b:
            case (Eq(l1, r1), Eq(l2, r2)) | (Mem(l1, r1), Mem(l2, r2)):
                go_t(l1, l2, active)
                go_t(r1, r2, active)
            case (Pred(n1, a1), Pred(n2, a2)) if n1 == n2 and len(a1) == len(a2):
                for p, q in zip(a1, a2):
                    go_t(p, q, active)
            case (Not(b1), Not(b2)):
                go_f(b1, b2, active)
            case (Imp(l1, r1), Imp(l2, r2)) | (And(l1, r1), And(l2, r2)) | (
                Or(l1, r1), Or(l2, r2)
            ) | (Iff(l1, r1), Iff(l2, r2)):
                go_f(l1, l2, active)
                go_f(r1, r2, active)
            case (All(v1, b1), All(v2, b2)) | (Ex(v1, b1), Ex(v2, b2)):
                if v1 != v2:
                    raise Mismatch
                go_f(b1, b2, active and v1 != x)
            case _:
                raise Mismatch

    try:
        go_f(g, h, True)
    except Mismatch:
        return None
    if not found:
        return Var(x.index) if g == h else None
    t0 = found[0]
    if any(t != t0 for t in found[1:]):
        return None
    try:
        if substitute(g, x, t0) != h:
            return None
    except CollisionError:
        return None
    return t0


def _one_occurrence_replaced(a: Formula, b: Formula, s: Term, t: Term) -> bool:
    """b is a with exactly one occurrence of subterm s replaced by t."""

    def term_diffs(p: Term, q: Term) -> Optional[int]:
        # number of replaced occurrences, or None if not explainable
        if p == q:
            return 0
        if p == s and q == t:
            return 1
        if isinstance(p, App) and isinstance(q, App) and p.name == q.name:
            total = 0
            for x, y in zip(p.args, q.args):
                d = term_diffs(x, y)
                if d is None:
                    return None
                total += d
            return total
        return None

    def args_of(f: Formula) -> Optional[tuple[Term, ...]]:
        match f:
            case Eq(l, r) | Mem(l, r):
                return (l, r)
            case Pred(_, args):
                return args
        return None

    pa, pb = args_of(a), args_of(b)
    if pa is None or pb is None or len(pa) != len(pb):
        return False
    if type(a) is not type(b):
        return False
    if isinstance(a, Pred) and a.name != b.name:
        return False
    total = 0
    for x, y in zip(pa, pb):
        d = term_diffs(x, y)
        if d is None:
            return False
        total += d
    return total == 1


def is_logical_axiom(f: Formula) -> Optional[str]:
    """Classify f as a logical axiom: taut, axsubst, axqdist, axexdef,
    axeqrefl or axeqcongr; None otherwise."""
    match f:
        case Eq(l, r) if l == r:
            return "axeqrefl"
        case Iff(Ex(x1, g1), Not(All(x2, Not(g2)))) if x1 == x2 and g1 == g2:
            return "axexdef"
        case Imp(All(x1, Imp(g1, h1)), Imp(g2, All(x2, h2))) if (
            x1 == x2 and g1 == g2 and h1 == h2 and x1 not in free_vars(g1)
        ):
            return "axqdist"
        case Imp(Eq(s, t), Imp(a, b)) if isinstance(a, (Eq, Mem, Pred)):
            if _one_occurrence_replaced(a, b, s, t):
                return "axeqcongr"
        case _:
            pass
    match f:
        case Imp(All(x, g), h):
            if infer_subst_term(g, x, h) is not None:
                return "axsubst"
    try:
        if is_tautology(f):
            return "taut"
    except TautologyCapError:
        pass
    return None


# ---------------------------------------------------------------------------
# Step checking

def _check_primitive(theory: Theory, steps: Sequence[Step], i: int) -> Optional[str]:
    """Return a failure reason for step i, or None if it checks."""
    f = steps[i].formula
    just = steps[i].just
    try:
        check_formula(f, theory.signature)
    except SyntaxError_ as e:
        return f"ill-formed formula: {e}"

    def premise(j: int) -> Optional[Formula]:
        if not (0 <= j < i):
            return None
        return steps[j].formula

    match just:
        case Taut():
            try:
                if not is_tautology(f):
                    return "not a propositional tautology"
            except TautologyCapError as e:
                return str(e)
        case AxSubst(x, t):
            match f:
                case Imp(All(x1, g), h) if x1 == x:
                    try:
                        check_term(t, theory.signature)
                        if substitute(g, x, t) != h:
                            return "conclusion is not the stated instance"
                    except (CollisionError, SyntaxError_) as e:
                        return f"bad instantiation: {e}"
                case _:
                    return "not of the form: imp all x G, G[t/x]"
        case AxQDist():
            match f:
                case Imp(All(x1, Imp(g1, h1)), Imp(g2, All(x2, h2))) if (
                    x1 == x2 and g1 == g2 and h1 == h2
                ):
                    if x1 in free_vars(g1):
                        return "distribution variable occurs free in the antecedent"
                case _:
                    return "not a quantifier distribution axiom"
        case AxExDef():
            match f:
                case Iff(Ex(x1, g1), Not(All(x2, Not(g2)))) if x1 == x2 and g1 == g2:
                    pass
                case _:
                    return "not an existential duality axiom"
        case AxEqRefl():
            match f:
                case Eq(l, r) if l == r:
                    pass
                case _:
                    return "not a reflexivity axiom"
        case AxEqCongr(pred):
            match f:
                case Imp(Eq(s, t), Imp(a, b)) if isinstance(a, (Eq, Mem, Pred)):
                    name = a.name if isinstance(a, Pred) else (
                        "eq" if isinstance(a, Eq) else "mem"
                    )
                    if name != pred:
                        return f"congruence is over {name}, not {pred}"
                    if not _one_occurrence_replaced(a, b, s, t):
                        return "not a one-occurrence congruence instance"
                case _:
                    return "not an equality congruence axiom"
        case Schema(schema_id, variables, payload):
            if schema_id not in theory.active_schemas:
                return f"schema {schema_id} is not active in this theory"
            try:
                expected = instantiate_schema(theory, schema_id, variables, payload)
            except (SchemaError, SyntaxError_) as e:
                return f"bad schema instantiation: {e}"
            if expected != f:
                return "formula is not the stated schema instance"
        case Basis(name):
            if not theory.has_basis(name):
                return f"no basis axiom named {name}"
            if theory.basis_formula(name) != f:
                return f"formula differs from basis axiom {name}"
        case MP(p, q):
            fp, fq = premise(p), premise(q)
            if fp is None or fq is None:
                return "premise index out of range"
            match fq:
                case Imp(l, r) if l == fp and r == f:
                    pass
                case _:
                    return "modus ponens premises do not fit"
        case Gen(x, p):
            fp = premise(p)
            if fp is None:
                return "premise index out of range"
            if f != All(x, fp):
                return "not the generalization of the premise"
        case Subst(p, x, t):
            fp = premise(p)
            if fp is None:
                return "premise index out of range"
            try:
                check_term(t, theory.signature)
                if substitute(fp, x, t) != f:
                    return "not the stated substitution instance"
            except (CollisionError, SyntaxError_) as e:
                return f"bad substitution: {e}"
        case Rename(p, old, fresh):
            fp = premise(p)
            if fp is None:
                return "premise index out of range"
            try:
                if rename_bound_check(fp, old, fresh) != f:
                    return "not the stated bound renaming"
            except SyntaxError_ as e:
                return f"bad renaming: {e}"
        case Derived():
            return "derived step reached the primitive checker"
        case _:
            return f"unknown justification {just!r}"
    return None


def rename_bound_check(f: Formula, old: Var, fresh: Var) -> Formula:
    from .syntax import rename_bound

    return rename_bound(f, old, fresh)


def check_proof(p: Proof) -> Verdict:
    """Check every step; deterministic and total."""
    for i, step in enumerate(p.steps):
        if isinstance(step.just, Derived):
            reason = _check_derived(p.theory, p.steps, i)
        else:
            reason = _check_primitive(p.theory, p.steps, i)
        if reason is not None:
            return Verdict(False, (i, reason))
    return Verdict(True)


def _check_derived(theory: Theory, steps: Sequence[Step], i: int) -> Optional[str]:
    just = steps[i].just
    assert isinstance(just, Derived)
    if any(not (0 <= j < i) for j in just.premises):
        return "premise index out of range"
    b = ProofBuilder(theory, list(steps[:i]))
    try:
        idx = elaborate_rule(just.rule, b, steps[i].formula, just.premises)
    except (KernelError, CollisionError, SchemaError, SyntaxError_) as e:
        return f"derived rule {just.rule} failed: {e}"
    if b.steps[idx].formula != steps[i].formula:
        return f"derived rule {just.rule} produced a different formula"
    for j in range(i, len(b.steps)):
        reason = _check_primitive(theory, b.steps, j)
        if reason is not None:
            return f"derived rule {just.rule}, expansion step {j + 1}: {reason}"
    return None


def flatten_proof(p: Proof) -> Proof:
    """Expand every Derived step into its primitive elaboration."""
    b = ProofBuilder(p.theory)
    mapping: dict[int, int] = {}

    def remap(just: Justification) -> Justification:
        match just:
            case MP(x, y):
                return MP(mapping[x], mapping[y])
            case Gen(v, x):
                return Gen(v, mapping[x])
            case Subst(x, v, t):
                return Subst(mapping[x], v, t)
            case Rename(x, o, n):
                return Rename(mapping[x], o, n)
            case _:
                return just

    for i, step in enumerate(p.steps):
        if isinstance(step.just, Derived):
            prem = tuple(mapping[j] for j in step.just.premises)
            idx = elaborate_rule(step.just.rule, b, step.formula, prem)
            if b.steps[idx].formula != step.formula:
                raise KernelError(f"flattening changed step {i + 1}")
            mapping[i] = idx
        else:
            mapping[i] = b.add(step.formula, remap(step.just))
    return b.proof()


# ---------------------------------------------------------------------------
# Proof builder and primitive emission helpers

class ProofBuilder:
    def __init__(self, theory: Theory, steps: Optional[list[Step]] = None):
        self.theory = theory
        self.steps: list[Step] = list(steps) if steps else []

    def add(self, formula: Formula, just: Justification) -> int:
        self.steps.append(Step(formula, just))
        return len(self.steps) - 1

    def proof(self) -> Proof:
        return Proof(self.theory, tuple(self.steps))

    def formula(self, i: int) -> Formula:
        return self.steps[i].formula

    def fresh(self, *extra: Formula) -> Var:
        avoid: set[Var] = set()
        for s in self.steps:
            avoid |= all_vars(s.formula)
        for f in extra:
            avoid |= all_vars(f)
        return fresh_var(frozenset(avoid))

    # -- primitives

    def taut(self, f: Formula) -> int:
        return self.add(f, Taut())

    def mp(self, premise: int, implication: int) -> int:
        match self.formula(implication):
            case Imp(l, r) if l == self.formula(premise):
                return self.add(r, MP(premise, implication))
        raise KernelError("mp: implication does not fit the premise")

    def gen(self, x: Var, premise: int) -> int:
        return self.add(All(x, self.formula(premise)), Gen(x, premise))

    def subst(self, premise: int, x: Var, t: Term) -> int:
        return self.add(substitute(self.formula(premise), x, t), Subst(premise, x, t))

    def axsubst(self, x: Var, g: Formula, t: Term) -> int:
        return self.add(Imp(All(x, g), substitute(g, x, t)), AxSubst(x, t))

    def qdist(self, x: Var, g: Formula, h: Formula) -> int:
        if x in free_vars(g):
            raise KernelError("qdist: variable free in antecedent")
        return self.add(
            Imp(All(x, Imp(g, h)), Imp(g, All(x, h))), AxQDist()
        )

    def exdef(self, x: Var, g: Formula) -> int:
        return self.add(Iff(Ex(x, g), Not(All(x, Not(g)))), AxExDef())

    def eqrefl(self, t: Term) -> int:
        return self.add(Eq(t, t), AxEqRefl())

    def eqcongr(self, f: Formula) -> int:
        match f:
            case Imp(Eq(_, _), Imp(a, _)):
                name = a.name if isinstance(a, Pred) else (
                    "eq" if isinstance(a, Eq) else "mem"
                )
                return self.add(f, AxEqCongr(name))
        raise KernelError("eqcongr: not a congruence shape")

    def schema(self, schema_id: str, variables: tuple[Var, ...], payload=None) -> int:
        f = instantiate_schema(self.theory, schema_id, variables, payload)
        return self.add(f, Schema(schema_id, variables, payload))

    def basis(self, name: str) -> int:
        return self.add(self.theory.basis_formula(name), Basis(name))

    def tautmp(self, target: Formula, premises: Sequence[int]) -> int:
        """target as a tautological consequence of the premise steps."""
        chain = target
        for j in reversed(premises):
            chain = Imp(self.formula(j), chain)
        if not is_tautology(chain):
            raise KernelError(
                "not a tautological consequence: " + render_formula(target)
            )
        idx = self.taut(chain)
        for j in premises:
            idx = self.mp(j, idx)
        return idx

    # -- quantifier templates

    def tpl_alldist(self, y: Var, f1: Formula, f2: Formula) -> int:
        """imp all y imp f1 f2  imp all y f1 all y f2"""
        big_x = All(y, Imp(f1, f2))
        big_y = All(y, f1)
        a1 = self.axsubst(y, Imp(f1, f2), y)
        a2 = self.axsubst(y, f1, y)
        c = self.tautmp(Imp(big_x, Imp(big_y, f2)), [a1, a2])
        g = self.gen(y, c)
        q1 = self.qdist(y, big_x, Imp(big_y, f2))
        m = self.mp(g, q1)
        q2 = self.qdist(y, big_y, f2)
        return self.tautmp(Imp(big_x, Imp(big_y, All(y, f2))), [m, q2])

    def tpl_exdist(self, y: Var, f1: Formula, f2: Formula) -> int:
        """imp all y imp f1 f2  imp ex y f1 ex y f2"""
        big_x = All(y, Imp(f1, f2))
        a1 = self.axsubst(y, Imp(f1, f2), y)
        c1 = self.tautmp(Imp(big_x, Imp(Not(f2), Not(f1))), [a1])
        g = self.gen(y, c1)
        q = self.qdist(y, big_x, Imp(Not(f2), Not(f1)))
        m = self.mp(g, q)
        d = self.tpl_alldist(y, Not(f2), Not(f1))
        c2 = self.tautmp(
            Imp(big_x, Imp(All(y, Not(f2)), All(y, Not(f1)))), [m, d]
        )
        e1 = self.exdef(y, f1)
        e2 = self.exdef(y, f2)
        return self.tautmp(Imp(big_x, Imp(Ex(y, f1), Ex(y, f2))), [c2, e1, e2])

    def tpl_and_all(self, y: Var, a: Formula, b: Formula) -> int:
        """imp and all y a all y b  all y and a b"""
        big = And(All(y, a), All(y, b))
        a1 = self.axsubst(y, a, y)
        a2 = self.axsubst(y, b, y)
        c = self.tautmp(Imp(big, And(a, b)), [a1, a2])
        g = self.gen(y, c)
        q = self.qdist(y, big, And(a, b))
        return self.mp(g, q)

    def tpl_closure_intro(self, x: Var, b: Formula) -> int:
        """imp b all x b, for x not free in b"""
        t = self.taut(Imp(b, b))
        g = self.gen(x, t)
        q = self.qdist(x, b, b)
        return self.mp(g, q)

    def tpl_ex_elim(self, u: Var, a: Formula, b: Formula) -> int:
        """imp all u imp a b  imp ex u a b, for u not free in b"""
        if u in free_vars(b):
            raise KernelError("ex_elim: variable free in the conclusion")
        big_x = All(u, Imp(a, b))
        a1 = self.axsubst(u, Imp(a, b), u)
        c1 = self.tautmp(Imp(big_x, Imp(Not(b), Not(a))), [a1])
        g = self.gen(u, c1)
        q = self.qdist(u, big_x, Imp(Not(b), Not(a)))
        m = self.mp(g, q)
        d = self.tpl_alldist(u, Not(b), Not(a))
        c2 = self.tautmp(Imp(big_x, Imp(All(u, Not(b)), All(u, Not(a)))), [m, d])
        nb = self.tpl_closure_intro(u, Not(b))
        e1 = self.exdef(u, a)
        return self.tautmp(Imp(big_x, Imp(Ex(u, a), b)), [c2, nb, e1])

    def tpl_ex_intro_imp(self, u: Var, g: Formula, t: Term) -> int:
        """imp g[t/u] ex u g"""
        a1 = self.axsubst(u, Not(g), t)
        e1 = self.exdef(u, g)
        target = Imp(substitute(g, u, t), Ex(u, g))
        return self.tautmp(target, [a1, e1])

    def tpl_ex_imp(self, u: Var, a: Formula, c: Formula) -> int:
        """imp ex u imp a c  imp a ex u c, for u not free in a"""
        if u in free_vars(a):
            raise KernelError("ex_imp: variable free in the antecedent")
        e1 = self.exdef(u, c)
        a1 = self.axsubst(u, Not(c), u)
        c1 = self.tautmp(Imp(c, Ex(u, c)), [a1, e1])
        c2 = self.tautmp(Imp(Imp(a, c), Imp(a, Ex(u, c))), [c1])
        g = self.gen(u, c2)
        d = Imp(a, Ex(u, c))
        t = self.tpl_ex_elim(u, Imp(a, c), d)
        return self.mp(g, t)

    def tpl_all_mono(self, y: Var, f1: Formula, f2: Formula, imp_idx: int) -> int:
        """From step imp f1 f2: imp all y f1 all y f2"""
        g = self.gen(y, imp_idx)
        d = self.tpl_alldist(y, f1, f2)
        return self.mp(g, d)

    def tpl_ex_mono(self, y: Var, f1: Formula, f2: Formula, imp_idx: int) -> int:
        """From step imp f1 f2: imp ex y f1 ex y f2"""
        g = self.gen(y, imp_idx)
        d = self.tpl_exdist(y, f1, f2)
        return self.mp(g, d)

    def tpl_push_all(self, z: Var, g: Formula, h: Formula, imp_idx: int) -> int:
        """From step imp g h (or its closure): imp g all z h, z not free in g"""
        cur = self.formula(imp_idx)
        if cur == Imp(g, h):
            imp_idx = self.gen(z, imp_idx)
        elif cur != All(z, Imp(g, h)):
            raise KernelError("push_all: premise shape mismatch")
        q = self.qdist(z, g, h)
        return self.mp(imp_idx, q)

    def tpl_rename_iff(self, source: Formula, target: Formula) -> int:
        """iff source target, where target renames bound variables of source."""
        if source == target:
            return self.taut(Iff(source, source))
        match source, target:
            case (Not(a), Not(b)):
                i = self.tpl_rename_iff(a, b)
                return self.tautmp(Iff(source, target), [i])
            case (Imp(l1, r1), Imp(l2, r2)) | (And(l1, r1), And(l2, r2)) | (
                Or(l1, r1), Or(l2, r2)
            ) | (Iff(l1, r1), Iff(l2, r2)):
                i = self.tpl_rename_iff(l1, l2)
                j = self.tpl_rename_iff(r1, r2)
                return self.tautmp(Iff(source, target), [i, j])
            case (All(x, a), All(x2, a2)):
                return self._rename_all_node(x, a, x2, a2)
            case (Ex(x, a), Ex(x2, a2)):
                e1 = self.exdef(x, a)
                e2 = self.exdef(x2, a2)
                j = self._rename_all_node(x, Not(a), x2, Not(a2))
                return self.tautmp(Iff(source, target), [e1, e2, j])
        raise KernelError("rename_iff: target is not a bound renaming of source")

    def _rename_all_node(self, x: Var, a: Formula, x2: Var, a2: Formula) -> int:
        if x == x2:
            i = self.tpl_rename_iff(a, a2)
            j1 = self.tautmp(Imp(a, a2), [i])
            m1 = self.tpl_all_mono(x, a, a2, j1)
            j2 = self.tautmp(Imp(a2, a), [i])
            m2 = self.tpl_all_mono(x, a2, a, j2)
            return self.tautmp(Iff(All(x, a), All(x2, a2)), [m1, m2])
        if x2 in all_vars(a) or x2 in free_vars(All(x, a)):
            raise KernelError(f"rename_iff: {x2} is not fresh for the source body")
        mid = substitute(a, x, x2)
        # iff all x a, all x2 mid
        s1 = self.axsubst(x, a, x2)
        s2 = self.tpl_push_all(x2, All(x, a), mid, s1)
        s3 = self.axsubst(x2, mid, x)
        s4 = self.tpl_push_all(x, All(x2, mid), a, s3)
        half = self.tautmp(Iff(All(x, a), All(x2, mid)), [s2, s4])
        if mid == a2:
            return half
        rest = self._rename_all_node(x2, mid, x2, a2)
        return self.tautmp(Iff(All(x, a), All(x2, a2)), [half, rest])

    def tpl_equiv_replace(self, iff_idx: int, context: Formula, path: tuple[int, ...]) -> int:
        """From step iff a b: iff context context[b at path], a at path."""
        match self.formula(iff_idx):
            case Iff(a, b):
                pass
            case _:
                raise KernelError("equiv_replace: premise is not an equivalence")
        if subformula_at(context, path) != a:
            raise KernelError("equiv_replace: context does not hold the source at path")

        def go(ctx: Formula, p: tuple[int, ...]) -> tuple[int, Formula]:
            if not p:
                return iff_idx, b
            head, rest = p[0], p[1:]
            match ctx:
                case Not(k):
                    i, k2 = go(k, rest)
                    new = Not(k2)
                    return self.tautmp(Iff(ctx, new), [i]), new
                case Imp(l, r) | And(l, r) | Or(l, r) | Iff(l, r):
                    ctor = type(ctx)
                    if head == 0:
                        i, l2 = go(l, rest)
                        new = ctor(l2, r)
                    else:
                        i, r2 = go(r, rest)
                        new = ctor(l, r2)
                    return self.tautmp(Iff(ctx, new), [i]), new
                case All(x, k):
                    i, k2 = go(k, rest)
                    new = All(x, k2)
                    j1 = self.tautmp(Imp(k, k2), [i])
                    m1 = self.tpl_all_mono(x, k, k2, j1)
                    j2 = self.tautmp(Imp(k2, k), [i])
                    m2 = self.tpl_all_mono(x, k2, k, j2)
                    return self.tautmp(Iff(ctx, new), [m1, m2]), new
                case Ex(x, k):
                    i, k2 = go(k, rest)
                    new = Ex(x, k2)
                    j1 = self.tautmp(Imp(k, k2), [i])
                    m1 = self.tpl_ex_mono(x, k, k2, j1)
                    j2 = self.tautmp(Imp(k2, k), [i])
                    m2 = self.tpl_ex_mono(x, k2, k, j2)
                    return self.tautmp(Iff(ctx, new), [m1, m2]), new
            raise KernelError("equiv_replace: path leads into an atom")

        idx, _ = go(context, path)
        return idx

    def tpl_subset_instance(self, u: Var, x: Var, y: Var, payload: Formula) -> int:
        """ex u all y iff mem y u and mem y x payload, for u not free in payload.

        Takes the direct subset-schema step when the strict side condition
        holds; otherwise runs the rename-and-substitute construction.
        """
        if len({u, x, y}) != 3:
            raise KernelError("subset_instance: variables must be distinct")
        pv = all_vars(payload)
        if u not in pv and x not in pv:
            return self.schema("A2", (u, x, y), payload)
        if u in free_vars(payload):
            raise KernelError("subset_instance: witness variable free in payload")
        if not self.theory.sf_flag:
            raise KernelError("subset_instance: relaxed payload needs an sf theory")
        xp = fresh_var(pv | {u, x, y})
        fp = substitute(payload, x, xp)
        fpp = freshen_bound(fp, all_vars(fp) | {u, x, y, xp})
        s1 = self.schema("A2", (u, x, y), fpp)
        s2 = self.subst(s1, xp, x)
        back = substitute(fpp, xp, x)
        r = self.tpl_rename_iff(back, payload)
        flipped = self.tautmp(Iff(payload, back), [r])
        # the payload sits at Ex-body / All-body / Iff-right / And-right
        repl = self.tpl_equiv_replace(flipped, _schemas._a2_formula(u, x, y, payload), (0, 0, 1, 1))
        # repl: iff (instance with payload) (instance with back); flip and apply
        return self.tautmp(_schemas._a2_formula(u, x, y, payload), [s2, repl])

    def tpl_lem4(self, u: Var, y: Var, payload: Formula) -> int:
        """iff ex u all y imp payload mem y u  ex u all y iff mem y u payload."""
        f = payload
        if u in free_vars(f):
            raise KernelError("lem4: witness variable free in the formula")
        if u == y:
            raise KernelError("lem4: variables must be distinct")
        v = fresh_var(all_vars(f) | {u, y})
        myu, myv = Mem(y, u), Mem(y, v)
        t1 = self.taut(
            Imp(Iff(myu, And(myv, f)), Imp(Imp(f, myv), Iff(myu, f)))
        )
        m1 = self.tpl_all_mono(
            y, Iff(myu, And(myv, f)), Imp(Imp(f, myv), Iff(myu, f)), t1
        )
        d1 = self.tpl_alldist(y, Imp(f, myv), Iff(myu, f))
        lhs = All(y, Iff(myu, And(myv, f)))
        mid_a = All(y, Imp(f, myv))
        mid_b = All(y, Iff(myu, f))
        c1 = self.tautmp(Imp(lhs, Imp(mid_a, mid_b)), [m1, d1])
        e1 = self.tpl_ex_mono(u, lhs, Imp(mid_a, mid_b), c1)
        s1 = self.tpl_subset_instance(u, v, y, f)
        m2 = self.mp(s1, e1)
        x1 = self.tpl_ex_imp(u, mid_a, mid_b)
        m3 = self.mp(m2, x1)
        s2 = self.subst(m3, v, u)
        g1 = self.gen(u, s2)
        ex_l = Ex(u, All(y, Imp(f, myu)))
        ex_r = Ex(u, mid_b)
        xe = self.tpl_ex_elim(u, All(y, Imp(f, myu)), ex_r)
        m4 = self.mp(g1, xe)
        t2 = self.taut(Imp(Iff(myu, f), Imp(f, myu)))
        m5 = self.tpl_all_mono(y, Iff(myu, f), Imp(f, myu), t2)
        m6 = self.tpl_ex_mono(u, mid_b, All(y, Imp(f, myu)), m5)
        return self.tautmp(Iff(ex_l, ex_r), [m4, m6])

    def tpl_stronger_exists(self, ex_idx: int, all_idx: int) -> int:
        """From ex u f and all u imp f g: ex u and f g."""
        match self.formula(all_idx):
            case All(u, Imp(f, g)):
                pass
            case _:
                raise KernelError("stronger_exists: second premise shape mismatch")
        match self.formula(ex_idx):
            case Ex(u2, f2) if u2 == u and f2 == f:
                pass
            case _:
                raise KernelError("stronger_exists: first premise shape mismatch")
        a = self.axsubst(u, Imp(f, g), u)
        m = self.mp(all_idx, a)
        b = self.tautmp(Imp(f, And(f, g)), [m])
        c = self.tpl_ex_mono(u, f, And(f, g), b)
        return self.mp(ex_idx, c)


# ---------------------------------------------------------------------------
# Derived rule dispatch (inference from the target formula and premises)

def _rule_tautmp(b: ProofBuilder, target: Formula, prem: tuple[int, ...]) -> int:
    return b.tautmp(target, list(prem))


def _rule_inst(b: ProofBuilder, target: Formula, prem: tuple[int, ...]) -> int:
    (p,) = prem
    match b.formula(p):
        case All(z, k):
            t = infer_subst_term(k, z, target)
            if t is None:
                raise KernelError("inst: target is not an instance of the premise")
            a = b.axsubst(z, k, t)
            return b.mp(p, a)
    raise KernelError("inst: premise is not universally quantified")


def _rule_gens(b: ProofBuilder, target: Formula, prem: tuple[int, ...]) -> int:
    (p,) = prem
    base = b.formula(p)
    vars_needed: list[Var] = []
    cur = target
    while cur != base:
        match cur:
            case All(v, body):
                vars_needed.append(v)
                cur = body
            case _:
                raise KernelError("gens: target is not a closure of the premise")
    idx = p
    for v in reversed(vars_needed):
        idx = b.gen(v, idx)
    return idx


def _rule_push_all(b: ProofBuilder, target: Formula, prem: tuple[int, ...]) -> int:
    (p,) = prem
    match target:
        case Imp(g, All(z, h)):
            return b.tpl_push_all(z, g, h, p)
    raise KernelError("push_all: target shape mismatch")


def _rule_strip_all(b: ProofBuilder, target: Formula, prem: tuple[int, ...]) -> int:
    (p,) = prem
    match b.formula(p), target:
        case Imp(g, All(z, h)), Imp(g2, h2) if g2 == g:
            t = infer_subst_term(h, z, h2)
            if t is None:
                raise KernelError("strip_all: conclusion is not an instance")
            a = b.axsubst(z, h, t)
            return b.tautmp(target, [p, a])
    raise KernelError("strip_all: shape mismatch")


def _rule_alldist(b: ProofBuilder, target: Formula, prem: tuple[int, ...]) -> int:
    match target:
        case Imp(All(y, Imp(f1, f2)), Imp(All(y2, g1), All(y3, g2))) if (
            y == y2 == y3 and g1 == f1 and g2 == f2
        ):
            return b.tpl_alldist(y, f1, f2)
    raise KernelError("alldist: target shape mismatch")


def _rule_exdist(b: ProofBuilder, target: Formula, prem: tuple[int, ...]) -> int:
    match target:
        case Imp(All(y, Imp(f1, f2)), Imp(Ex(y2, g1), Ex(y3, g2))) if (
            y == y2 == y3 and g1 == f1 and g2 == f2
        ):
            return b.tpl_exdist(y, f1, f2)
    raise KernelError("exdist: target shape mismatch")


def _rule_and_all(b: ProofBuilder, target: Formula, prem: tuple[int, ...]) -> int:
    match target:
        case Imp(And(All(y, a), All(y2, c)), All(y3, And(a2, c2))) if (
            y == y2 == y3 and a2 == a and c2 == c
        ):
            return b.tpl_and_all(y, a, c)
    raise KernelError("and_all: target shape mismatch")


def _rule_ex_elim(b: ProofBuilder, target: Formula, prem: tuple[int, ...]) -> int:
    (p,) = prem
    # target: prefix of alls, then imp (ex y a) c; premise: same prefix, all y imp a c
    prefix: list[Var] = []
    t = target
    while True:
        match t:
            case Imp(Ex(y, a), c):
                break
            case All(v, body):
                prefix.append(v)
                t = body
            case _:
                raise KernelError("ex_elim: target shape mismatch")
    idx = p
    cur = b.formula(p)
    for v in prefix:
        match cur:
            case All(v2, body) if v2 == v:
                a1 = b.axsubst(v, body, v)
                idx = b.mp(idx, a1)
                cur = body
            case _:
                raise KernelError("ex_elim: premise prefix mismatch")
    if cur != All(y, Imp(a, c)):
        raise KernelError("ex_elim: premise core mismatch")
    tpl = b.tpl_ex_elim(y, a, c)
    idx = b.mp(idx, tpl)
    for v in reversed(prefix):
        idx = b.gen(v, idx)
    return idx


def _rule_ex_imp(b: ProofBuilder, target: Formula, prem: tuple[int, ...]) -> int:
    (p,) = prem
    match b.formula(p), target:
        case Ex(u, Imp(a, c)), Imp(a2, Ex(u2, c2)) if a2 == a and u2 == u and c2 == c:
            tpl = b.tpl_ex_imp(u, a, c)
            return b.mp(p, tpl)
    raise KernelError("ex_imp: shape mismatch")


def _rule_ex_intro(b: ProofBuilder, target: Formula, prem: tuple[int, ...]) -> int:
    (p,) = prem
    match target:
        case Ex(u, g):
            t = infer_subst_term(g, u, b.formula(p))
            if t is None:
                raise KernelError("ex_intro: premise is not an instance of the body")
            tpl = b.tpl_ex_intro_imp(u, g, t)
            return b.mp(p, tpl)
    raise KernelError("ex_intro: target is not existential")


def _mono_core(b, target, prem, lift_shape, lift):
    """Shared driver for the monotonicity rules.

    Lifting form: target imp Q(f1) Q(f2); premise (if any) proves
    imp f1 f2, otherwise it must be a tautology.  Applied form: target
    Q(f2) with premise Q(f1) and a tautological inner implication.
    """
    got = lift_shape(target)
    if got is not None:
        f1, f2 = got
        if prem:
            (p,) = prem
            if b.formula(p) != Imp(f1, f2):
                raise KernelError("monotonicity: premise is not the inner implication")
            return lift(f1, f2, p)
        return lift(f1, f2, b.taut(Imp(f1, f2)))
    if not prem:
        raise KernelError("monotonicity: target shape mismatch")
    (p,) = prem
    got = lift_shape(Imp(b.formula(p), target))
    if got is None:
        raise KernelError("monotonicity: shapes mismatch")
    f1, f2 = got
    lifted = lift(f1, f2, b.taut(Imp(f1, f2)))
    return b.mp(p, lifted)


def _rule_all_mono(b: ProofBuilder, target: Formula, prem: tuple[int, ...]) -> int:
    def shape(tgt):
        match tgt:
            case Imp(All(y, f1), All(y2, f2)) if y == y2:
                return f1, f2
        return None

    def lift(f1, f2, idx):
        match target:
            case Imp(All(y, _), _) | All(y, _):
                return b.tpl_all_mono(y, f1, f2, idx)
        raise KernelError("all_mono: cannot determine the variable")

    return _mono_core(b, target, prem, shape, lift)


def _rule_ex_mono(b: ProofBuilder, target: Formula, prem: tuple[int, ...]) -> int:
    def shape(tgt):
        match tgt:
            case Imp(Ex(y, f1), Ex(y2, f2)) if y == y2:
                return f1, f2
        return None

    def lift(f1, f2, idx):
        match target:
            case Imp(Ex(y, _), _) | Ex(y, _):
                return b.tpl_ex_mono(y, f1, f2, idx)
        raise KernelError("ex_mono: cannot determine the variable")

    return _mono_core(b, target, prem, shape, lift)


def _rule_exall_mono(b: ProofBuilder, target: Formula, prem: tuple[int, ...]) -> int:
    def shape(tgt):
        match tgt:
            case Imp(Ex(u, All(y, f1)), Ex(u2, All(y2, f2))) if u == u2 and y == y2:
                return f1, f2
        return None

    def lift(f1, f2, idx):
        match target:
            case Imp(Ex(u, All(y, _)), _) | Ex(u, All(y, _)):
                a = b.tpl_all_mono(y, f1, f2, idx)
                return b.tpl_ex_mono(u, All(y, f1), All(y, f2), a)
        raise KernelError("exall_mono: cannot determine the variables")

    return _mono_core(b, target, prem, shape, lift)


def _rule_rename_iff(b: ProofBuilder, target: Formula, prem: tuple[int, ...]) -> int:
    match target:
        case Iff(src, tgt):
            return b.tpl_rename_iff(src, tgt)
    raise KernelError("rename_iff: target is not an equivalence")


def _find_divergence(c1: Formula, c2: Formula, a: Formula, target: Formula) -> Optional[tuple[int, ...]]:
    if c1 == a and c2 == target:
        return ()
    pairs: list[tuple[int, Formula, Formula]]
    match c1, c2:
        case (Not(x), Not(y)):
            pairs = [(0, x, y)]
        case (Imp(l1, r1), Imp(l2, r2)) | (And(l1, r1), And(l2, r2)) | (
            Or(l1, r1), Or(l2, r2)
        ) | (Iff(l1, r1), Iff(l2, r2)):
            pairs = [(0, l1, l2), (1, r1, r2)]
        case (All(v1, x), All(v2, y)) | (Ex(v1, x), Ex(v2, y)):
            if v1 != v2:
                return None
            pairs = [(0, x, y)]
        case _:
            return None
    diff = [(i, x, y) for i, x, y in pairs if x != y]
    if len(diff) != 1:
        return None
    i, x, y = diff[0]
    sub = _find_divergence(x, y, a, target)
    return None if sub is None else (i,) + sub


def _rule_equiv_replace(b: ProofBuilder, target: Formula, prem: tuple[int, ...]) -> int:
    (p,) = prem
    match b.formula(p), target:
        case Iff(a, bb), Iff(c1, c2):
            if c1 == c2 and a == bb:
                return b.taut(Iff(c1, c2))
            path = _find_divergence(c1, c2, a, bb)
            if path is None:
                raise KernelError("equiv_replace: cannot locate the replacement")
            return b.tpl_equiv_replace(p, c1, path)
    raise KernelError("equiv_replace: shapes mismatch")


def _rule_subset_instance(b: ProofBuilder, target: Formula, prem: tuple[int, ...]) -> int:
    match target:
        case Ex(u, All(y, Iff(Mem(y1, u1), And(Mem(y2, x), payload)))) if (
            y1 == y and y2 == y and u1 == u
        ):
            return b.tpl_subset_instance(u, x, y, payload)
    raise KernelError("subset_instance: target is not a subset instance")


def _rule_lem4(b: ProofBuilder, target: Formula, prem: tuple[int, ...]) -> int:
    match target:
        case Iff(Ex(u, All(y, Imp(f, Mem(y1, u1)))), Ex(u2, All(y2, Iff(Mem(y3, u3), f2)))) if (
            u1 == u and u2 == u and u3 == u and y1 == y and y2 == y and y3 == y and f2 == f
        ):
            return b.tpl_lem4(u, y, f)
        case Ex(u, All(y, Iff(Mem(y3, u3), f))) if y3 == y and u3 == u and prem:
            (p,) = prem
            match b.formula(p):
                case Ex(u2, All(y2, Imp(f2, Mem(_, _)))) if u2 == u and y2 == y and f2 == f:
                    i = b.tpl_lem4(u, y, f)
                    return b.tautmp(target, [p, i])
    raise KernelError("lem4: target shape mismatch")


def _rule_stronger_exists(b: ProofBuilder, target: Formula, prem: tuple[int, ...]) -> int:
    i, j = prem
    idx = b.tpl_stronger_exists(i, j)
    if b.formula(idx) != target:
        raise KernelError("stronger_exists: target mismatch")
    return idx


_RULES: dict[str, Callable[[ProofBuilder, Formula, tuple[int, ...]], int]] = {
    "tautmp": _rule_tautmp,
    "inst": _rule_inst,
    "gens": _rule_gens,
    "push_all": _rule_push_all,
    "strip_all": _rule_strip_all,
    "alldist": _rule_alldist,
    "exdist": _rule_exdist,
    "and_all": _rule_and_all,
    "ex_elim": _rule_ex_elim,
    "ex_imp": _rule_ex_imp,
    "ex_intro": _rule_ex_intro,
    "all_mono": _rule_all_mono,
    "ex_mono": _rule_ex_mono,
    "exall_mono": _rule_exall_mono,
    "rename_iff": _rule_rename_iff,
    "equiv_replace": _rule_equiv_replace,
    "subset_instance": _rule_subset_instance,
    "lem4": _rule_lem4,
    "stronger_exists": _rule_stronger_exists,
}

DERIVED_RULE_NAMES = tuple(sorted(_RULES))


def elaborate_rule(rule: str, b: ProofBuilder, target: Formula, premises: tuple[int, ...]) -> int:
    fn = _RULES.get(rule)
    if fn is None:
        raise KernelError(f"unknown derived rule: {rule}")
    return fn(b, target, premises)


# ---------------------------------------------------------------------------
# Proof transformations

def deduction_transform(p: Proof, axiom_name: str, goal_index: Optional[int] = None) -> Proof:
    """Discharge the closed basis axiom `axiom_name`.

    Returns a proof over the theory without that axiom whose final formula
    is imp H G, where H is the discharged axiom and G the goal step's
    formula (default: the last step).
    """
    h = p.theory.basis_formula(axiom_name)
    if free_vars(h):
        raise KernelError("deduction_transform: the discharged axiom must be closed")
    fp = flatten_proof(p)
    if goal_index is None:
        goal_index = len(fp.steps) - 1
    reduced = _schemas.Theory(
        signature=p.theory.signature,
        basis=tuple((n, f) for n, f in p.theory.basis if n != axiom_name),
        active_schemas=p.theory.active_schemas,
        sf_flag=p.theory.sf_flag,
        chain=p.theory.chain,
        obligations=p.theory.obligations,
    )
    b = ProofBuilder(reduced)
    mapping: dict[int, int] = {}
    for i, step in enumerate(fp.steps[: goal_index + 1]):
        f = step.formula
        just = step.just
        if isinstance(just, Basis) and just.name == axiom_name:
            if f != h:
                raise KernelError("deduction_transform: axiom step formula mismatch")
            mapping[i] = b.taut(Imp(h, h))
        elif isinstance(just, AXIOM_JUSTIFICATIONS):
            a = b.add(f, just)
            mapping[i] = b.tautmp(Imp(h, f), [a])
        elif isinstance(just, MP):
            mapping[i] = b.tautmp(
                Imp(h, f), [mapping[just.premise], mapping[just.implication]]
            )
        elif isinstance(just, Gen):
            x, body = just.var, fp.steps[just.premise].formula
            g = b.gen(x, mapping[just.premise])
            q = b.qdist(x, h, body)
            mapping[i] = b.mp(g, q)
        elif isinstance(just, Subst):
            new = substitute(
                Imp(h, fp.steps[just.premise].formula), just.var, just.term
            )
            if new != Imp(h, f):
                raise KernelError(
                    "deduction_transform: substitution interferes with the axiom"
                )
            mapping[i] = b.subst(mapping[just.premise], just.var, just.term)
        elif isinstance(just, Rename):
            if just.old in binders(h) or just.fresh in all_vars(h):
                raise KernelError(
                    "deduction_transform: renaming interferes with the axiom"
                )
            mapping[i] = b.add(
                Imp(h, f), Rename(mapping[just.premise], just.old, just.fresh)
            )
        else:
            raise KernelError(f"deduction_transform: unsupported step {just!r}")
    return b.proof()


def _replace_const_term(t: Term, c: str, x: Var) -> Term:
    match t:
        case Var():
            return t
        case Const(name):
            return x if name == c else t
        case App(n, args):
            return App(n, tuple(_replace_const_term(a, c, x) for a in args))
    raise TypeError(t)


def replace_constant(f: Formula, c: str, x: Var) -> Formula:
    def rt(t: Term) -> Term:
        return _replace_const_term(t, c, x)

    match f:
        case Eq(l, r):
            return Eq(rt(l), rt(r))
        case Mem(l, r):
            return Mem(rt(l), rt(r))
        case Pred(n, args):
            return Pred(n, tuple(rt(a) for a in args))
        case Not(b):
            return Not(replace_constant(b, c, x))
        case Imp(l, r):
            return Imp(replace_constant(l, c, x), replace_constant(r, c, x))
        case And(l, r):
            return And(replace_constant(l, c, x), replace_constant(r, c, x))
        case Or(l, r):
            return Or(replace_constant(l, c, x), replace_constant(r, c, x))
        case Iff(l, r):
            return Iff(replace_constant(l, c, x), replace_constant(r, c, x))
        case All(v, b):
            return All(v, replace_constant(b, c, x))
        case Ex(v, b):
            return Ex(v, replace_constant(b, c, x))
    raise TypeError(f)


def generalize_constant(p: Proof, c: str, x: Var, close: bool = False) -> Proof:
    """Replace the constant c by the fresh variable x throughout.

    c must not occur in any basis axiom, and x must be fresh for every
    step.  With close=True a final generalization over x is appended.
    The result is over the theory with c removed and is re-checked.
    """
    fp = flatten_proof(p)
    for step in fp.steps:
        if x in all_vars(step.formula):
            raise KernelError(f"generalize_constant: {x} is not fresh")
    reduced = _schemas.without_constant(p.theory, c)

    def map_just(j: Justification) -> Justification:
        match j:
            case AxSubst(v, t):
                return AxSubst(v, _replace_const_term(t, c, x))
            case Subst(i, v, t):
                return Subst(i, v, _replace_const_term(t, c, x))
            case Schema(sid, vs, payload):
                return Schema(
                    sid, vs, None if payload is None else replace_constant(payload, c, x)
                )
            case _:
                return j

    steps = tuple(
        Step(replace_constant(s.formula, c, x), map_just(s.just)) for s in fp.steps
    )
    out = Proof(reduced, steps)
    if close:
        b = ProofBuilder(reduced, list(steps))
        b.gen(x, len(steps) - 1)
        out = b.proof()
    v = check_proof(out)
    if not v.ok:
        raise KernelError(
            f"generalize_constant: transformed proof fails at step "
            f"{v.first_failure[0] + 1}: {v.first_failure[1]}"
        )
    return out


def equivalence_replace(p_equiv: Proof, context: Formula, path: tuple[int, ...]) -> Proof:
    """Extend a proof of iff F F' to one of iff context context[F' at path]."""
    try:
        subformula_at(context, path)
    except SyntaxError_ as e:
        raise KernelError(f"equivalence_replace: {e}")
    b = ProofBuilder(p_equiv.theory, list(p_equiv.steps))
    b.tpl_equiv_replace(len(p_equiv.steps) - 1, context, path)
    return b.proof()


def quantifier_monotone(p: Proof, mode: str, variables: tuple[Var, ...]) -> Proof:
    """Lift a proof of imp F1 F2 through quantifiers (modes all, ex, ex_all)."""
    match p.steps[-1].formula:
        case Imp(f1, f2):
            pass
        case _:
            raise KernelError("quantifier_monotone: proof must end in an implication")
    b = ProofBuilder(p.theory, list(p.steps))
    last = len(p.steps) - 1
    if mode == "all":
        (y,) = variables
        b.tpl_all_mono(y, f1, f2, last)
    elif mode == "ex":
        (y,) = variables
        b.tpl_ex_mono(y, f1, f2, last)
    elif mode == "ex_all":
        u, y = variables
        if u == y:
            raise KernelError("quantifier_monotone: variables must be distinct")
        i = b.tpl_all_mono(y, f1, f2, last)
        b.tpl_ex_mono(u, All(y, f1), All(y, f2), i)
    else:
        raise KernelError(f"quantifier_monotone: unknown mode {mode}")
    return b.proof()


def subset_instance(theory: Theory, payload: Formula, u: Var, x: Var, y: Var) -> Proof:
    """Standalone proof of the relaxed subset instance for the payload."""
    b = ProofBuilder(theory)
    b.tpl_subset_instance(u, x, y, payload)
    return b.proof()
