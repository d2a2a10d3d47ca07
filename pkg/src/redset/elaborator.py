"""Elimination of defined symbols back into the base language.

Predicates unfold by substituting the defining body at each atom.
Constants and function symbols are removed innermost-first: an atomic
subformula A holding an occurrence of the symbol becomes

    ex u' ( <body defining u' as that term's value>  and  A[u'] )

with u' fresh.  Since each definition asserts unique existence, the
existential form is equivalent to the original atom wherever the term
denotes.  Elimination in reverse chain order yields a pure base-language
formula.

Fresh variables take the smallest index not used by the working formula;
bound variables of the definition body are renamed when they would clash.
The output is deterministic.
"""

from __future__ import annotations

from typing import Optional

from .schemas import Definition, Theory
from .syntax import (
    All, And, App, Const, Eq, Ex, Formula, Iff, Imp, Mem, Not, Or, Pred,
    Term, Var,
    all_vars, formula_symbols, fresh_var, freshen_bound_clashes,
    substitute, substitute_parallel, term_vars,
)


class ElaborationError(ValueError):
    pass


def _instantiate_body(
    d: Definition, value: Var, args: tuple[Term, ...], avoid: frozenset[Var]
) -> Formula:
    """Definition body with the value variable and argument terms plugged in."""
    body = d.body
    arg_avoid = frozenset().union(*[term_vars(a) for a in args]) if args else frozenset()
    body = freshen_bound_clashes(body, avoid | arg_avoid | {value})
    mapping: dict[Var, Term] = dict(zip(d.arg_vars, args))
    if d.value_var is not None:
        mapping[d.value_var] = value
    return substitute_parallel(body, mapping)


# ---------------------------------------------------------------------------
# Predicate elimination

def eliminate_predicate(f: Formula, d: Definition) -> Formula:
    """Replace every atom of the defined predicate by its unfolded body."""
    if d.kind != "predicate":
        raise ElaborationError(f"{d.symbol} is not a predicate definition")

    def go(g: Formula) -> Formula:
        match g:
            case Pred(name, args) if name == d.symbol:
                body = d.body
                arg_avoid = frozenset().union(*[term_vars(a) for a in args]) if args else frozenset()
                body = freshen_bound_clashes(body, all_vars(f) | arg_avoid)
                return substitute_parallel(body, dict(zip(d.arg_vars, args)))
            case Eq() | Mem() | Pred():
                return g
            case Not(b):
                return Not(go(b))
            case Imp(l, r):
                return Imp(go(l), go(r))
            case And(l, r):
                return And(go(l), go(r))
            case Or(l, r):
                return Or(go(l), go(r))
            case Iff(l, r):
                return Iff(go(l), go(r))
            case All(v, b):
                return All(v, go(b))
            case Ex(v, b):
                return Ex(v, go(b))
        raise TypeError(g)

    return go(f)


# ---------------------------------------------------------------------------
# Term-symbol elimination

def _find_innermost(t: Term, symbol: str) -> Optional[Term]:
    """An occurrence of symbol in t whose own arguments avoid it."""
    match t:
        case Var():
            return None
        case Const(name):
            return t if name == symbol else None
        case App(name, args):
            for a in args:
                hit = _find_innermost(a, symbol)
                if hit is not None:
                    return hit
            if name == symbol:
                return t
            return None
    raise TypeError(t)


def _replace_once(t: Term, target: Term, replacement: Term) -> tuple[Term, bool]:
    if t == target:
        return replacement, True
    match t:
        case App(name, args):
            new_args = []
            done = False
            for a in args:
                if done:
                    new_args.append(a)
                else:
                    na, done = _replace_once(a, target, replacement)
                    new_args.append(na)
            return App(name, tuple(new_args)), done
        case _:
            return t, False


def _atom_terms(a: Formula) -> tuple[Term, ...]:
    match a:
        case Eq(l, r) | Mem(l, r):
            return (l, r)
        case Pred(_, args):
            return args
    raise TypeError(a)


def _rebuild_atom(a: Formula, terms: tuple[Term, ...]) -> Formula:
    match a:
        case Eq(_, _):
            return Eq(terms[0], terms[1])
        case Mem(_, _):
            return Mem(terms[0], terms[1])
        case Pred(name, _):
            return Pred(name, terms)
    raise TypeError(a)


def eliminate_term_symbol(f: Formula, d: Definition) -> Formula:
    """Remove every occurrence of a defined constant or function symbol."""
    if d.kind not in ("constant", "function"):
        raise ElaborationError(f"{d.symbol} does not define a term symbol")

    def step(g: Formula) -> Optional[Formula]:
        # rewrite one innermost occurrence inside one atom, outside-in
        match g:
            case Eq() | Mem() | Pred():
                for pos, t in enumerate(_atom_terms(g)):
                    hit = _find_innermost(t, d.symbol)
                    if hit is None:
                        continue
                    witness = fresh_var(all_vars(f_current))
                    args = hit.args if isinstance(hit, App) else ()
                    body = _instantiate_body(
                        d, witness, args, all_vars(f_current) | {witness}
                    )
                    terms = list(_atom_terms(g))
                    terms[pos], done = _replace_once(terms[pos], hit, witness)
                    assert done
                    return Ex(witness, And(body, _rebuild_atom(g, tuple(terms))))
                return None
            case Not(b):
                nb = step(b)
                return None if nb is None else Not(nb)
            case Imp(l, r):
                nl = step(l)
                if nl is not None:
                    return Imp(nl, r)
                nr = step(r)
                return None if nr is None else Imp(l, nr)
            case And(l, r):
                nl = step(l)
                if nl is not None:
                    return And(nl, r)
                nr = step(r)
                return None if nr is None else And(l, nr)
            case Or(l, r):
                nl = step(l)
                if nl is not None:
                    return Or(nl, r)
                nr = step(r)
                return None if nr is None else Or(l, nr)
            case Iff(l, r):
                nl = step(l)
                if nl is not None:
                    return Iff(nl, r)
                nr = step(r)
                return None if nr is None else Iff(l, nr)
            case All(v, b):
                nb = step(b)
                return None if nb is None else All(v, nb)
            case Ex(v, b):
                nb = step(b)
                return None if nb is None else Ex(v, nb)
        raise TypeError(g)

    f_current = f
    while True:
        nxt = step(f_current)
        if nxt is None:
            return f_current
        f_current = nxt


def elaborate_to_base(theory: Theory, f: Formula) -> Formula:
    """Eliminate the whole definitional chain, newest symbol first."""
    out = f
    for d in reversed(theory.chain):
        if d.kind == "predicate":
            out = eliminate_predicate(out, d)
        else:
            out = eliminate_term_symbol(out, d)
    leftovers = formula_symbols(out)
    if leftovers & {d.symbol for d in theory.chain}:
        raise ElaborationError(f"chain symbols survived elimination: {leftovers}")
    return out
