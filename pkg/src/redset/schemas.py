"""Theories, axiom schemas and definitional extensions.

A Theory bundles a signature, named basis axioms, the set of active axiom
schemas, the subset-friendliness flag and a chain of definitional
extensions.  Schemas are instantiated from canonical patterns over a fixed
variable tuple; classification is strictly syntactic, recovering the tuple
(and payload, for the subset and replacement schemas) by structural match.

Schema ids: A1..A6 for the base axioms, E1..E6 for the canonical
definitional axioms of the extended language, A5ext for the rewritten
subset-friendliness axiom in the extended language, and Repl for the
replacement schema (inert unless activated).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

from .syntax import (
    All, And, App, Const, Eq, Ex, Formula, Iff, Imp, Mem, Not, Or, Pred,
    Signature, SyntaxError_, Term, Var, BASE,
    all_vars, check_formula, formula_symbols, free_vars, is_base,
    parse_formula,
)


class SchemaError(ValueError):
    """Bad schema instantiation: wrong tuple, side condition, or payload."""


class TheoryError(ValueError):
    """Ill-formed theory construction or extension."""


# ---------------------------------------------------------------------------
# Definitional extensions

@dataclass(frozen=True)
class Definition:
    """One step of a definitional-extension chain.

    kind "predicate":  adds p with axiom  iff p(args) body
    kind "constant":   adds c with axiom  iff eq value c    body
    kind "function":   adds f with axiom  iff eq value f(args) body

    body is a formula of the language before this step; its free variables
    are confined to args (predicate), {value} (constant) or {value} + args
    (function).  exists_ref / unique_ref name the proof obligations.
    """

    kind: str
    symbol: str
    arity: int
    value_var: Optional[Var]
    arg_vars: tuple[Var, ...]
    body: Formula
    schema_id: str = ""
    exists_ref: Optional[str] = None
    unique_ref: Optional[str] = None

    def __post_init__(self):
        if self.kind not in ("predicate", "constant", "function"):
            raise TheoryError(f"bad definition kind: {self.kind}")
        if self.kind == "predicate":
            if self.value_var is not None:
                raise TheoryError("predicate definitions have no value variable")
            if len(self.arg_vars) != self.arity:
                raise TheoryError("argument variables must match the arity")
            allowed = set(self.arg_vars)
        else:
            if self.value_var is None:
                raise TheoryError(f"{self.kind} definitions need a value variable")
            if self.kind == "constant" and (self.arity != 0 or self.arg_vars):
                raise TheoryError("constants take no arguments")
            if self.kind == "function" and (
                self.arity < 1 or len(self.arg_vars) != self.arity
            ):
                raise TheoryError("function arity must match argument variables")
            allowed = {self.value_var} | set(self.arg_vars)
        designated = list(self.arg_vars) + ([self.value_var] if self.value_var else [])
        if len(set(designated)) != len(designated):
            raise TheoryError("designated variables must be distinct")
        stray = free_vars(self.body) - allowed
        if stray:
            raise TheoryError(
                f"definition body has stray free variables: {sorted(v.index for v in stray)}"
            )
        if not self.schema_id:
            object.__setattr__(self, "schema_id", f"def-{self.symbol}")

    def head(self) -> Formula:
        if self.kind == "predicate":
            return Pred(self.symbol, tuple(self.arg_vars))
        if self.kind == "constant":
            return Eq(self.value_var, Const(self.symbol))
        return Eq(self.value_var, App(self.symbol, tuple(self.arg_vars)))

    def canonical_axiom(self) -> Formula:
        return Iff(self.head(), self.body)

    def designated_tuple(self) -> tuple[Var, ...]:
        head = ([self.value_var] if self.value_var else []) + list(self.arg_vars)
        return tuple(head) + _binder_order(self.body)

    def exists_obligation(self) -> Optional[Formula]:
        if self.kind == "predicate":
            return None
        return Ex(self.value_var, self.body)

    def unique_obligation(self) -> Optional[Formula]:
        """-> body -> body[v/value] eq value v, with v fresh."""
        if self.kind == "predicate":
            return None
        from .syntax import fresh_var, substitute

        v = fresh_var(all_vars(self.body) | {self.value_var, *self.arg_vars})
        return Imp(
            self.body,
            Imp(substitute(self.body, self.value_var, v), Eq(self.value_var, v)),
        )


def _binder_order(f: Formula) -> tuple[Var, ...]:
    """Binder variables in depth-first order of first binding."""
    out: list[Var] = []

    def go(g: Formula):
        match g:
            case Eq() | Mem() | Pred():
                pass
            case Not(b):
                go(b)
            case Imp(l, r) | And(l, r) | Or(l, r) | Iff(l, r):
                go(l)
                go(r)
            case All(v, b) | Ex(v, b):
                if v not in out:
                    out.append(v)
                go(b)

    go(f)
    return tuple(out)


# ---------------------------------------------------------------------------
# Theories

@dataclass(frozen=True)
class Theory:
    """An immutable theory; extension operations return new values."""

    signature: Signature = BASE
    basis: tuple[tuple[str, Formula], ...] = ()
    active_schemas: frozenset[str] = frozenset()
    sf_flag: bool = False
    chain: tuple[Definition, ...] = ()
    obligations: tuple[tuple[str, Formula, Optional[str]], ...] = ()

    def __post_init__(self):
        names = [n for n, _ in self.basis]
        if len(set(names)) != len(names):
            raise TheoryError("duplicate basis axiom names")
        for name, f in self.basis:
            check_formula(f, self.signature)
        if self.sf_flag and "A2" not in self.active_schemas:
            raise TheoryError("sf theories must keep the subset schema A2 active")

    def basis_formula(self, name: str) -> Formula:
        for n, f in self.basis:
            if n == name:
                return f
        raise TheoryError(f"no basis axiom named {name}")

    def has_basis(self, name: str) -> bool:
        return any(n == name for n, _ in self.basis)

    def definition(self, schema_id: str) -> Optional[Definition]:
        for d in self.chain:
            if d.schema_id == schema_id:
                return d
        return None


def extend_with_axiom(theory: Theory, name: str, f: Formula) -> Theory:
    if theory.has_basis(name):
        raise TheoryError(f"duplicate basis axiom name: {name}")
    check_formula(f, theory.signature)
    return replace(theory, basis=theory.basis + ((name, f),))


def extend_with_constant(theory: Theory, name: str) -> Theory:
    return replace(theory, signature=theory.signature.with_constant(name))


def extend_with_function(theory: Theory, name: str, arity: int) -> Theory:
    return replace(theory, signature=theory.signature.with_function(name, arity))


def without_constant(theory: Theory, name: str) -> Theory:
    """Drop a constant; every basis axiom must already avoid it."""
    for n, f in theory.basis:
        if name in formula_symbols(f):
            raise TheoryError(f"basis axiom {n} mentions constant {name}")
    return replace(theory, signature=theory.signature.without_constant(name))


def extend_by_definition(theory: Theory, d: Definition) -> Theory:
    check_formula(d.body, theory.signature)
    if theory.signature.has_symbol(d.symbol):
        raise TheoryError(f"symbol already declared: {d.symbol}")
    if any(c.schema_id == d.schema_id for c in theory.chain):
        raise TheoryError(f"duplicate schema id: {d.schema_id}")
    if d.kind == "predicate":
        sig = theory.signature.with_predicate(d.symbol, d.arity)
    elif d.kind == "constant":
        sig = theory.signature.with_constant(d.symbol)
    else:
        sig = theory.signature.with_function(d.symbol, d.arity)
    obligations = list(theory.obligations)
    ex = d.exists_obligation()
    if ex is not None:
        obligations.append((f"exists-{d.symbol}", ex, d.exists_ref))
    un = d.unique_obligation()
    if un is not None:
        obligations.append((f"unique-{d.symbol}", un, d.unique_ref))
    return replace(
        theory,
        signature=sig,
        chain=theory.chain + (d,),
        active_schemas=theory.active_schemas | {d.schema_id},
        obligations=tuple(obligations),
    )


# ---------------------------------------------------------------------------
# Canonical schema patterns
#
# Every pattern is a closed recipe over the canonical tuple below; an
# instance is the pattern with the tuple renamed to any distinct variables
# (payload slots excepted).  Tuple orders are part of the file format.

def _v(*idx: int) -> tuple[Var, ...]:
    return tuple(Var(i) for i in idx)


_A1 = parse_formula("imp all x3 iff mem x3 x1 mem x3 x2 eq x1 x2")
_A3 = parse_formula(
    "imp ex x2 mem x2 x1 ex x2 and mem x2 x1 not ex x3 and mem x3 x1 mem x3 x2"
)
_A4 = parse_formula("ex x1 and mem x2 x1 mem x3 x1")
_A5 = parse_formula(
    "ex x1 and and and mem x2 x1"
    " all x3 imp mem x3 x1 all x4 imp mem x4 x3 mem x4 x1"
    " all x3 imp mem x3 x1 ex x4 and mem x4 x1"
    " all x5 iff mem x5 x4 all x6 imp mem x6 x5 mem x6 x3"
    " all x3 imp mem x3 x1 all x4 imp mem x4 x1"
    " ex x5 and and mem x5 x1 and mem x3 x5 mem x4 x5"
    " all x6 imp mem x6 x5 all x7 imp mem x7 x6 mem x7 x5"
)
_A6 = parse_formula(
    "imp all x2 imp mem x2 x1 ex x5 mem x5 x2"
    " imp all x2 all x3 imp mem x2 x1 imp mem x3 x1"
    " imp ex x5 and mem x5 x2 mem x5 x3 eq x2 x3"
    " ex x3 all x2 imp mem x2 x1"
    " ex x4 and and mem x4 x2 mem x4 x3"
    " all x5 imp and mem x5 x2 mem x5 x3 eq x4 x5"
)

_EXT_FOR_A5EXT = Signature(
    constants=frozenset(),
    functions=(("pw", 1), ("pr", 2)),
    predicates=(("sub", 2),),
)
_A5EXT = parse_formula(
    "ex x1 and and and mem x2 x1"
    " all x3 imp mem x3 x1 sub x3 x1"
    " all x3 imp mem x3 x1 mem pw(x3) x1"
    " all x3 imp mem x3 x1 all x4 imp mem x4 x1"
    " ex x5 and and mem x5 x1 sub pr(x3 x4) x5"
    " all x6 imp mem x6 x5 sub x6 x5",
    _EXT_FOR_A5EXT,
)

# (pattern, canonical tuple) for the fixed, payload-free schemas
_FIXED: dict[str, tuple[Formula, tuple[Var, ...]]] = {
    "A1": (_A1, _v(1, 2, 3)),        # (u, v, y)
    "A3": (_A3, _v(1, 2, 3)),        # (u, y, z)
    "A4": (_A4, _v(1, 2, 3)),        # (u, x, y)
    "A5": (_A5, _v(1, 2, 3, 4, 5, 6, 7)),  # (u, x, y, z, v, w, t)
    "A6": (_A6, _v(1, 2, 3, 4, 5)),  # (u, x, y, v, w)
    "A5ext": (_A5EXT, _v(1, 2, 3, 4, 5, 6)),  # (u, x, y, z, v, w)
}


@dataclass(frozen=True)
class SchemaMatch:
    schema_id: str
    variables: tuple[Var, ...]
    payload: Optional[Formula] = None


def _rename_all(f: Formula, mapping: dict[Var, Var]) -> Formula:
    def rt(t: Term) -> Term:
        match t:
            case Var():
                return mapping.get(t, t)
            case Const():
                return t
            case App(n, args):
                return App(n, tuple(rt(a) for a in args))
        raise TypeError(t)

    match f:
        case Eq(l, r):
            return Eq(rt(l), rt(r))
        case Mem(l, r):
            return Mem(rt(l), rt(r))
        case Pred(n, args):
            return Pred(n, tuple(rt(a) for a in args))
        case Not(b):
            return Not(_rename_all(b, mapping))
        case Imp(l, r):
            return Imp(_rename_all(l, mapping), _rename_all(r, mapping))
        case And(l, r):
            return And(_rename_all(l, mapping), _rename_all(r, mapping))
        case Or(l, r):
            return Or(_rename_all(l, mapping), _rename_all(r, mapping))
        case Iff(l, r):
            return Iff(_rename_all(l, mapping), _rename_all(r, mapping))
        case All(v, b):
            return All(mapping.get(v, v), _rename_all(b, mapping))
        case Ex(v, b):
            return Ex(mapping.get(v, v), _rename_all(b, mapping))
    raise TypeError(f)


def _match_pattern(pattern: Formula, candidate: Formula, mapping: dict[Var, Var]) -> bool:
    """Structural match; pattern variables map bijectively onto candidate's."""

    def mt(p: Term, c: Term) -> bool:
        match p, c:
            case (Var(), Var()):
                if p in mapping:
                    return mapping[p] == c
                if c in mapping.values():
                    return False
                mapping[p] = c
                return True
            case (Const(a), Const(b)):
                return a == b
            case (App(n1, a1), App(n2, a2)):
                return n1 == n2 and len(a1) == len(a2) and all(
                    mt(x, y) for x, y in zip(a1, a2)
                )
        return False

    match pattern, candidate:
        case (Eq(l1, r1), Eq(l2, r2)) | (Mem(l1, r1), Mem(l2, r2)):
            return mt(l1, l2) and mt(r1, r2)
        case (Pred(n1, a1), Pred(n2, a2)):
            return n1 == n2 and len(a1) == len(a2) and all(
                mt(x, y) for x, y in zip(a1, a2)
            )
        case (Not(b1), Not(b2)):
            return _match_pattern(b1, b2, mapping)
        case (Imp(l1, r1), Imp(l2, r2)) | (And(l1, r1), And(l2, r2)) | (
            Or(l1, r1), Or(l2, r2)
        ) | (Iff(l1, r1), Iff(l2, r2)):
            return _match_pattern(l1, l2, mapping) and _match_pattern(r1, r2, mapping)
        case (All(v1, b1), All(v2, b2)) | (Ex(v1, b1), Ex(v2, b2)):
            return mt(v1, v2) and _match_pattern(b1, b2, mapping)
    return False


def _check_distinct(variables: tuple[Var, ...], schema_id: str) -> None:
    if len(set(variables)) != len(variables):
        raise SchemaError(f"{schema_id} needs pairwise distinct variables")


def _a2_formula(u: Var, x: Var, y: Var, payload: Formula) -> Formula:
    return Ex(u, All(y, Iff(Mem(y, u), And(Mem(y, x), payload))))


def _repl_formula(x: Var, y: Var, z: Var, u: Var, v: Var, payload: Formula) -> Formula:
    return Imp(
        All(x, Ex(z, All(y, Iff(payload, Mem(y, z))))),
        Ex(u, All(y, Imp(Ex(x, And(Mem(x, v), payload)), Mem(y, u)))),
    )


def _check_a2_payload(theory: Theory, u: Var, x: Var, payload: Formula) -> None:
    check_formula(payload, theory.signature)
    if not is_base(payload) and not theory.sf_flag:
        # payloads in a richer language are justified by the theory being
        # subset-friendly (constants via the conservative-extension lemma,
        # defined symbols via the chain's sf-preservation)
        raise SchemaError("extended-language A2 payloads need an sf theory")
    pv = all_vars(payload)
    if u not in pv and x not in pv:
        return
    if theory.sf_flag and u not in free_vars(payload):
        # relaxed subset instance; the kernel discharges it via the
        # rename-and-substitute construction behind subset_instance
        return
    raise SchemaError(
        "A2 payload must avoid the witness and parameter variables "
        "(or, in an sf theory, at least keep the witness variable non-free)"
    )


def instantiate_schema(
    theory: Theory,
    schema_id: str,
    variables: tuple[Var, ...],
    payload: Optional[Formula] = None,
) -> Formula:
    """Build the exact schema instance for the given variable tuple."""
    if schema_id == "A2":
        if payload is None:
            raise SchemaError("A2 requires a payload formula")
        if len(variables) != 3:
            raise SchemaError("A2 takes a (u, x, y) triple")
        _check_distinct(variables, "A2")
        u, x, y = variables
        _check_a2_payload(theory, u, x, payload)
        return _a2_formula(u, x, y, payload)

    if schema_id == "Repl":
        if payload is None:
            raise SchemaError("Repl requires a payload formula")
        if len(variables) != 5:
            raise SchemaError("Repl takes an (x, y, z, u, v) tuple")
        _check_distinct(variables, "Repl")
        x, y, z, u, v = variables
        check_formula(payload, theory.signature)
        bad = {u, v, z} & all_vars(payload)
        if bad:
            raise SchemaError("Repl payload must avoid u, v and z entirely")
        return _repl_formula(x, y, z, u, v, payload)

    if payload is not None:
        raise SchemaError(f"{schema_id} takes no payload")

    if schema_id in _FIXED:
        pattern, canon = _FIXED[schema_id]
    else:
        d = theory.definition(schema_id)
        if d is None:
            raise SchemaError(f"unknown schema id: {schema_id}")
        pattern, canon = d.canonical_axiom(), d.designated_tuple()
    if len(variables) != len(canon):
        raise SchemaError(
            f"{schema_id} takes {len(canon)} variables, got {len(variables)}"
        )
    _check_distinct(variables, schema_id)
    return _rename_all(pattern, dict(zip(canon, variables)))


def _classify_a2(theory: Theory, f: Formula) -> Optional[SchemaMatch]:
    match f:
        case Ex(u, All(y, Iff(Mem(Var() as y1, Var() as u1), And(Mem(Var() as y2, Var() as x), payload)))):
            if y1 == y and y2 == y and u1 == u and len({u, x, y}) == 3:
                try:
                    _check_a2_payload(theory, u, x, payload)
                except (SchemaError, SyntaxError_):
                    return None
                return SchemaMatch("A2", (u, x, y), payload)
    return None


def _classify_repl(theory: Theory, f: Formula) -> Optional[SchemaMatch]:
    match f:
        case Imp(
            All(x, Ex(z, All(y, Iff(payload, Mem(Var() as y1, Var() as z1))))),
            Ex(u, All(y2, Imp(Ex(x2, And(Mem(Var() as x3, Var() as v), payload2)), Mem(Var() as y3, Var() as u1)))),
        ):
            if (
                y1 == y and z1 == z and y2 == y and x2 == x and x3 == x
                and y3 == y and u1 == u and payload == payload2
                and len({x, y, z, u, v}) == 5
                and not ({u, v, z} & all_vars(payload))
            ):
                try:
                    check_formula(payload, theory.signature)
                except SyntaxError_:
                    return None
                return SchemaMatch("Repl", (x, y, z, u, v), payload)
    return None


def classify_axiom(theory: Theory, f: Formula) -> Optional[SchemaMatch]:
    """Recover the active schema instance that f is, if any."""
    order = ["A1", "A2", "A3", "A4", "A5", "A6", "A5ext", "Repl"] + [
        d.schema_id for d in theory.chain
    ]
    for schema_id in order:
        if schema_id not in theory.active_schemas:
            continue
        if schema_id == "A2":
            m = _classify_a2(theory, f)
            if m:
                return m
            continue
        if schema_id == "Repl":
            m = _classify_repl(theory, f)
            if m:
                return m
            continue
        if schema_id in _FIXED:
            pattern, canon = _FIXED[schema_id]
        else:
            d = theory.definition(schema_id)
            if d is None:
                continue
            pattern, canon = d.canonical_axiom(), d.designated_tuple()
        mapping: dict[Var, Var] = {}
        if _match_pattern(pattern, f, mapping):
            if all(v in mapping for v in canon):
                return SchemaMatch(schema_id, tuple(mapping[v] for v in canon))
    return None


# ---------------------------------------------------------------------------
# Canonical theories

def rst() -> Theory:
    """The base theory: schemas A1..A6 over the pure language, sf by fiat."""
    return Theory(
        signature=BASE,
        active_schemas=frozenset({"A1", "A2", "A3", "A4", "A5", "A6"}),
        sf_flag=True,
    )


def canonical_definitions() -> tuple[Definition, ...]:
    b = parse_formula
    return (
        Definition(
            "constant", "O", 0, Var(1), (),
            b("all x2 not mem x2 x1"),
            schema_id="E1", exists_ref="nice-e1", unique_ref="uniq-e1",
        ),
        Definition(
            "predicate", "sub", 2, None, (Var(1), Var(2)),
            b("all x3 imp mem x3 x1 mem x3 x2"),
            schema_id="E2",
        ),
        Definition(
            "function", "un", 1, Var(1), (Var(2),),
            b("all x3 iff mem x3 x1 ex x4 and mem x3 x4 mem x4 x2"),
            schema_id="E3", exists_ref="union-exists", unique_ref="uniq-e3",
        ),
        Definition(
            "function", "sg", 1, Var(1), (Var(2),),
            b("all x3 iff mem x3 x1 eq x3 x2"),
            schema_id="E4", exists_ref="nice-e4", unique_ref="uniq-e4",
        ),
        Definition(
            "function", "pr", 2, Var(1), (Var(2), Var(3)),
            b("all x4 iff mem x4 x1 or eq x4 x2 eq x4 x3"),
            schema_id="E5", exists_ref="nice-e5", unique_ref="uniq-e5",
        ),
        Definition(
            "function", "pw", 1, Var(1), (Var(2),),
            b("all x3 iff mem x3 x1 all x4 imp mem x4 x3 mem x4 x2"),
            schema_id="E6", exists_ref="nice-e6", unique_ref="uniq-e6",
        ),
    )


def rst_ext() -> Theory:
    """The extended theory: the canonical chain E1..E6 plus A5ext.

    Activating A5ext alongside A5 records the extended-language form of
    the subset-friendliness axiom; the two are interchangeable once the
    defined symbols are eliminated, which the model layer checks
    semantically.
    """
    t = rst()
    for d in canonical_definitions():
        t = extend_by_definition(t, d)
    return replace(t, active_schemas=t.active_schemas | {"A5ext"})


def zfc_prime() -> Theory:
    """rst with the replacement schema switched on."""
    t = rst()
    return replace(t, active_schemas=t.active_schemas | {"Repl"})
