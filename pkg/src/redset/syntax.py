"""Terms and formulas of the set-theoretic language, in Polish notation.

The base language has variables x1, x2, ... and the two binary predicates
`eq` (equality) and `mem` (membership); atoms of base formulas take only
variables as arguments.  Extended languages add constants, function symbols
and further predicates through a Signature.

Concrete syntax is whitespace-separated Polish text with the keywords
eq, mem, not, imp, and, or, iff, all, ex; function application is written
`f(t1 t2)`.  parse and render are mutually inverse.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Union


class SyntaxError_(ValueError):
    """Raised on malformed input text or ill-formed trees."""


class CollisionError(ValueError):
    """A substitution would capture a variable; carries the binder."""

    def __init__(self, binder: "Var", message: str | None = None):
        self.binder = binder
        super().__init__(message or f"substitution collides with binder {binder}")


# ---------------------------------------------------------------------------
# Terms

@dataclass(frozen=True)
class Var:
    """A variable x_index with index >= 1."""

    index: int

    def __post_init__(self):
        if self.index < 1:
            raise SyntaxError_(f"variable index must be >= 1, got {self.index}")

    def __repr__(self):
        return f"x{self.index}"


@dataclass(frozen=True)
class Const:
    name: str

    def __repr__(self):
        return self.name


@dataclass(frozen=True)
class App:
    name: str
    args: tuple["Term", ...]

    def __post_init__(self):
        if not self.args:
            raise SyntaxError_(f"function {self.name} applied to no arguments")

    def __repr__(self):
        return f"{self.name}({' '.join(map(repr, self.args))})"


Term = Union[Var, Const, App]


# ---------------------------------------------------------------------------
# Formulas

@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Mem:
    left: Term
    right: Term


@dataclass(frozen=True)
class Pred:
    """An atom of a declared predicate other than eq/mem, e.g. `sub`."""

    name: str
    args: tuple[Term, ...]


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class Imp:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class All:
    var: Var
    body: "Formula"


@dataclass(frozen=True)
class Ex:
    var: Var
    body: "Formula"


Formula = Union[Eq, Mem, Pred, Not, Imp, And, Or, Iff, All, Ex]

ATOMS = (Eq, Mem, Pred)
BINARY = (Imp, And, Or, Iff)
QUANTIFIERS = (All, Ex)

_KEYWORDS = {"eq", "mem", "not", "imp", "and", "or", "iff", "all", "ex"}
_VAR_RE = re.compile(r"^x([0-9]+)$")


# ---------------------------------------------------------------------------
# Signatures

@dataclass(frozen=True)
class Signature:
    """Symbol table: constants, function arities, predicate arities.

    eq and mem are always present as 2-ary predicates and cannot be
    redeclared.  Names are unique across all three kinds and may not be
    keywords or look like variables.
    """

    constants: frozenset[str] = frozenset()
    functions: tuple[tuple[str, int], ...] = ()
    predicates: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        seen = set()
        for name in list(self.constants) + [n for n, _ in self.functions] + [
            n for n, _ in self.predicates
        ]:
            if name in _KEYWORDS or _VAR_RE.match(name):
                raise SyntaxError_(f"reserved symbol name: {name}")
            if name in ("eq", "mem"):
                raise SyntaxError_(f"{name} is built in and not redefinable")
            if name in seen:
                raise SyntaxError_(f"duplicate symbol name: {name}")
            seen.add(name)
        for name, arity in self.functions:
            if arity < 1:
                raise SyntaxError_(f"function {name} must have arity >= 1")

    def function_arity(self, name: str) -> Optional[int]:
        for n, a in self.functions:
            if n == name:
                return a
        return None

    def predicate_arity(self, name: str) -> Optional[int]:
        if name in ("eq", "mem"):
            return 2
        for n, a in self.predicates:
            if n == name:
                return a
        return None

    def has_symbol(self, name: str) -> bool:
        return (
            name in self.constants
            or self.function_arity(name) is not None
            or self.predicate_arity(name) is not None
        )

    def with_constant(self, name: str) -> "Signature":
        if self.has_symbol(name):
            raise SyntaxError_(f"symbol already declared: {name}")
        return Signature(self.constants | {name}, self.functions, self.predicates)

    def with_function(self, name: str, arity: int) -> "Signature":
        if self.has_symbol(name):
            raise SyntaxError_(f"symbol already declared: {name}")
        return Signature(self.constants, self.functions + ((name, arity),), self.predicates)

    def with_predicate(self, name: str, arity: int) -> "Signature":
        if self.has_symbol(name):
            raise SyntaxError_(f"symbol already declared: {name}")
        return Signature(self.constants, self.functions, self.predicates + ((name, arity),))

    def without_constant(self, name: str) -> "Signature":
        if name not in self.constants:
            raise SyntaxError_(f"not a declared constant: {name}")
        return Signature(self.constants - {name}, self.functions, self.predicates)


BASE = Signature()

# Signature of the full extended language built by the canonical chain:
# constant O (empty set), functions un/sg/pw (1-ary) and pr (2-ary),
# predicate sub (2-ary).
EXT = Signature(
    constants=frozenset({"O"}),
    functions=(("un", 1), ("sg", 1), ("pr", 2), ("pw", 1)),
    predicates=(("sub", 2),),
)


# ---------------------------------------------------------------------------
# Variable analysis

def term_vars(t: Term) -> frozenset[Var]:
    match t:
        case Var():
            return frozenset((t,))
        case Const():
            return frozenset()
        case App(_, args):
            out: frozenset[Var] = frozenset()
            for a in args:
                out |= term_vars(a)
            return out
    raise TypeError(t)


def free_vars(f: Formula) -> frozenset[Var]:
    """The set of variables with a free occurrence in f."""
    match f:
        case Eq(l, r) | Mem(l, r):
            return term_vars(l) | term_vars(r)
        case Pred(_, args):
            out: frozenset[Var] = frozenset()
            for a in args:
                out |= term_vars(a)
            return out
        case Not(b):
            return free_vars(b)
        case Imp(l, r) | And(l, r) | Or(l, r) | Iff(l, r):
            return free_vars(l) | free_vars(r)
        case All(v, b) | Ex(v, b):
            return free_vars(b) - {v}
    raise TypeError(f)


def all_vars(f: Formula) -> frozenset[Var]:
    """All variables occurring in f, free, bound or as binders."""
    match f:
        case Eq() | Mem() | Pred():
            return free_vars(f)
        case Not(b):
            return all_vars(b)
        case Imp(l, r) | And(l, r) | Or(l, r) | Iff(l, r):
            return all_vars(l) | all_vars(r)
        case All(v, b) | Ex(v, b):
            return all_vars(b) | {v}
    raise TypeError(f)


def binders(f: Formula) -> frozenset[Var]:
    match f:
        case Eq() | Mem() | Pred():
            return frozenset()
        case Not(b):
            return binders(b)
        case Imp(l, r) | And(l, r) | Or(l, r) | Iff(l, r):
            return binders(l) | binders(r)
        case All(v, b) | Ex(v, b):
            return binders(b) | {v}
    raise TypeError(f)


def term_constants(t: Term) -> frozenset[str]:
    match t:
        case Var():
            return frozenset()
        case Const(name):
            return frozenset((name,))
        case App(_, args):
            out: frozenset[str] = frozenset()
            for a in args:
                out |= term_constants(a)
            return out
    raise TypeError(t)


def formula_symbols(f: Formula) -> frozenset[str]:
    """Names of all non-built-in symbols (constants, functions, predicates)."""
    out: set[str] = set()

    def walk_term(t: Term):
        match t:
            case Var():
                pass
            case Const(name):
                out.add(name)
            case App(name, args):
                out.add(name)
                for a in args:
                    walk_term(a)

    for atom in atoms(f):
        match atom:
            case Eq(l, r) | Mem(l, r):
                walk_term(l)
                walk_term(r)
            case Pred(name, args):
                out.add(name)
                for a in args:
                    walk_term(a)
    return frozenset(out)


def atoms(f: Formula) -> Iterator[Formula]:
    match f:
        case Eq() | Mem() | Pred():
            yield f
        case Not(b):
            yield from atoms(b)
        case Imp(l, r) | And(l, r) | Or(l, r) | Iff(l, r):
            yield from atoms(l)
            yield from atoms(r)
        case All(_, b) | Ex(_, b):
            yield from atoms(b)


def fresh_var(avoid: frozenset[Var] | set[Var]) -> Var:
    """Smallest-index variable not in avoid."""
    used = {v.index for v in avoid}
    i = 1
    while i in used:
        i += 1
    return Var(i)


# ---------------------------------------------------------------------------
# Substitution and renaming

def substitute_term(t: Term, x: Var, s: Term) -> Term:
    match t:
        case Var():
            return s if t == x else t
        case Const():
            return t
        case App(name, args):
            return App(name, tuple(substitute_term(a, x, s) for a in args))
    raise TypeError(t)


def substitute(f: Formula, x: Var, t: Term) -> Formula:
    """Replace every free occurrence of x in f by t.

    Collision-free only: raises CollisionError if a free occurrence of x
    sits in the scope of a binder on a variable of t.  Bound occurrences
    are never touched and no renaming happens here; discharge collisions
    with rename_bound first.
    """
    tv = term_vars(t)

    def go(g: Formula) -> Formula:
        match g:
            case Eq(l, r):
                return Eq(substitute_term(l, x, t), substitute_term(r, x, t))
            case Mem(l, r):
                return Mem(substitute_term(l, x, t), substitute_term(r, x, t))
            case Pred(name, args):
                return Pred(name, tuple(substitute_term(a, x, t) for a in args))
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
                if v == x:
                    return g
                if v in tv and x in free_vars(b):
                    raise CollisionError(v)
                return All(v, go(b))
            case Ex(v, b):
                if v == x:
                    return g
                if v in tv and x in free_vars(b):
                    raise CollisionError(v)
                return Ex(v, go(b))
        raise TypeError(g)

    return go(f)


def substitute_parallel(f: Formula, mapping: Mapping[Var, Term]) -> Formula:
    """Simultaneously replace free occurrences of several variables.

    Collision-free in the same sense as substitute.
    """

    def rt(t: Term, m: Mapping[Var, Term]) -> Term:
        match t:
            case Var():
                return m.get(t, t)
            case Const():
                return t
            case App(name, args):
                return App(name, tuple(rt(a, m) for a in args))
        raise TypeError(t)

    def go(g: Formula, m: Mapping[Var, Term]) -> Formula:
        if not m:
            return g
        match g:
            case Eq(l, r):
                return Eq(rt(l, m), rt(r, m))
            case Mem(l, r):
                return Mem(rt(l, m), rt(r, m))
            case Pred(name, args):
                return Pred(name, tuple(rt(a, m) for a in args))
            case Not(b):
                return Not(go(b, m))
            case Imp(l, r):
                return Imp(go(l, m), go(r, m))
            case And(l, r):
                return And(go(l, m), go(r, m))
            case Or(l, r):
                return Or(go(l, m), go(r, m))
            case Iff(l, r):
                return Iff(go(l, m), go(r, m))
            case All(v, b) | Ex(v, b):
                m2 = {k: t for k, t in m.items() if k != v}
                fv = free_vars(b)
                for k, t in m2.items():
                    if k in fv and v in term_vars(t):
                        raise CollisionError(v)
                body = go(b, m2)
                return All(v, body) if isinstance(g, All) else Ex(v, body)
        raise TypeError(g)

    return go(f, dict(mapping))


def rename_bound(f: Formula, old: Var, fresh: Var) -> Formula:
    """Rename every binder on `old` (and its bound occurrences) to `fresh`.

    Free occurrences of `old` are left alone.  Requires fresh not to occur
    in f at all.
    """
    if fresh in all_vars(f):
        raise SyntaxError_(f"{fresh} is not fresh for the formula")
    if old == fresh:
        raise SyntaxError_("old and fresh variables must differ")

    def go(g: Formula) -> Formula:
        match g:
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
                b2 = go(b)
                if v == old:
                    return All(fresh, substitute(b2, old, fresh))
                return All(v, b2)
            case Ex(v, b):
                b2 = go(b)
                if v == old:
                    return Ex(fresh, substitute(b2, old, fresh))
                return Ex(v, b2)
        raise TypeError(g)

    return go(f)


def freshen_bound(f: Formula, avoid: frozenset[Var]) -> Formula:
    """Rename each bound variable of f to a fresh one outside `avoid`.

    Distinct original binder variables get distinct replacements, allocated
    in increasing index order of first need.
    """
    taken = set(avoid) | all_vars(f)
    out = f
    for b in sorted(binders(f), key=lambda v: v.index):
        nv = fresh_var(frozenset(taken))
        taken.add(nv)
        out = rename_bound(out, b, nv)
    return out


def freshen_bound_clashes(f: Formula, avoid: frozenset[Var] | set[Var]) -> Formula:
    """Rename only those bound variables of f that lie in `avoid`."""
    taken = set(avoid) | all_vars(f)
    out = f
    for b in sorted(binders(f) & frozenset(avoid), key=lambda v: v.index):
        nv = fresh_var(frozenset(taken))
        taken.add(nv)
        out = rename_bound(out, b, nv)
    return out


# ---------------------------------------------------------------------------
# Paths into formulas (used by the kernel's equivalence replacement)

def subformula_at(f: Formula, path: tuple[int, ...]) -> Formula:
    cur = f
    for i in path:
        match cur, i:
            case (Not(b), 0) | (All(_, b), 0) | (Ex(_, b), 0):
                cur = b
            case (Imp(l, _), 0) | (And(l, _), 0) | (Or(l, _), 0) | (Iff(l, _), 0):
                cur = l
            case (Imp(_, r), 1) | (And(_, r), 1) | (Or(_, r), 1) | (Iff(_, r), 1):
                cur = r
            case _:
                raise SyntaxError_(f"invalid path {path} into formula")
    return cur


def replace_at(f: Formula, path: tuple[int, ...], g: Formula) -> Formula:
    if not path:
        return g
    i, rest = path[0], path[1:]
    match f, i:
        case (Not(b), 0):
            return Not(replace_at(b, rest, g))
        case (All(v, b), 0):
            return All(v, replace_at(b, rest, g))
        case (Ex(v, b), 0):
            return Ex(v, replace_at(b, rest, g))
        case (Imp(l, r), 0):
            return Imp(replace_at(l, rest, g), r)
        case (Imp(l, r), 1):
            return Imp(l, replace_at(r, rest, g))
        case (And(l, r), 0):
            return And(replace_at(l, rest, g), r)
        case (And(l, r), 1):
            return And(l, replace_at(r, rest, g))
        case (Or(l, r), 0):
            return Or(replace_at(l, rest, g), r)
        case (Or(l, r), 1):
            return Or(l, replace_at(r, rest, g))
        case (Iff(l, r), 0):
            return Iff(replace_at(l, rest, g), r)
        case (Iff(l, r), 1):
            return Iff(l, replace_at(r, rest, g))
    raise SyntaxError_(f"invalid path {path} into formula")


def binders_on_path(f: Formula, path: tuple[int, ...]) -> frozenset[Var]:
    out: set[Var] = set()
    cur = f
    for i in path:
        match cur:
            case All(v, _) | Ex(v, _):
                out.add(v)
        cur = subformula_at(cur, (i,))
    return frozenset(out)


# ---------------------------------------------------------------------------
# Well-formedness over a signature

def check_term(t: Term, sig: Signature) -> None:
    match t:
        case Var():
            return
        case Const(name):
            if name not in sig.constants:
                raise SyntaxError_(f"unknown constant: {name}")
        case App(name, args):
            arity = sig.function_arity(name)
            if arity is None:
                raise SyntaxError_(f"unknown function symbol: {name}")
            if len(args) != arity:
                raise SyntaxError_(
                    f"arity mismatch: {name} takes {arity} arguments, got {len(args)}"
                )
            for a in args:
                check_term(a, sig)


def check_formula(f: Formula, sig: Signature, base_atoms: bool = False) -> None:
    """Validate f over sig.  With base_atoms, atom arguments must be variables."""
    match f:
        case Eq(l, r) | Mem(l, r):
            if base_atoms and not (isinstance(l, Var) and isinstance(r, Var)):
                raise SyntaxError_("base-language atoms take only variables")
            check_term(l, sig)
            check_term(r, sig)
        case Pred(name, args):
            arity = sig.predicate_arity(name)
            if arity is None or name in ("eq", "mem"):
                raise SyntaxError_(f"unknown predicate: {name}")
            if len(args) != arity:
                raise SyntaxError_(
                    f"arity mismatch: {name} takes {arity} arguments, got {len(args)}"
                )
            if base_atoms and not all(isinstance(a, Var) for a in args):
                raise SyntaxError_("base-language atoms take only variables")
            for a in args:
                check_term(a, sig)
        case Not(b):
            check_formula(b, sig, base_atoms)
        case Imp(l, r) | And(l, r) | Or(l, r) | Iff(l, r):
            check_formula(l, sig, base_atoms)
            check_formula(r, sig, base_atoms)
        case All(_, b) | Ex(_, b):
            check_formula(b, sig, base_atoms)
        case _:
            raise TypeError(f)


def is_base(f: Formula) -> bool:
    """True iff every atom of f is eq/mem applied to variables only."""
    for a in atoms(f):
        match a:
            case Eq(Var(), Var()) | Mem(Var(), Var()):
                pass
            case _:
                return False
    return True


# ---------------------------------------------------------------------------
# Parsing

_TOKEN_RE = re.compile(r"[()]|[A-Za-z0-9_]+")


def tokenize(text: str) -> list[str]:
    tokens = []
    pos = 0
    for m in _TOKEN_RE.finditer(text):
        if text[pos : m.start()].strip():
            raise SyntaxError_(f"unexpected character at: {text[pos:m.start()]!r}")
        tokens.append(m.group(0))
        pos = m.end()
    if text[pos:].strip():
        raise SyntaxError_(f"unexpected character at: {text[pos:]!r}")
    return tokens


class _Parser:
    def __init__(self, tokens: list[str], sig: Signature):
        self.tokens = tokens
        self.pos = 0
        self.sig = sig

    def peek(self) -> Optional[str]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> str:
        tok = self.peek()
        if tok is None:
            raise SyntaxError_("unexpected end of input")
        self.pos += 1
        return tok

    def expect(self, tok: str) -> None:
        got = self.next()
        if got != tok:
            raise SyntaxError_(f"expected {tok!r}, got {got!r}")

    def variable(self) -> Var:
        tok = self.next()
        m = _VAR_RE.match(tok)
        if not m or int(m.group(1)) < 1:
            raise SyntaxError_(f"expected a variable, got {tok!r}")
        return Var(int(m.group(1)))

    def term(self) -> Term:
        tok = self.next()
        m = _VAR_RE.match(tok)
        if m:
            if int(m.group(1)) < 1:
                raise SyntaxError_(f"bad variable {tok!r}")
            return Var(int(m.group(1)))
        if tok in ("(", ")"):
            raise SyntaxError_(f"unexpected {tok!r} in term")
        arity = self.sig.function_arity(tok)
        if arity is not None:
            self.expect("(")
            args = []
            while self.peek() != ")":
                args.append(self.term())
            self.expect(")")
            if len(args) != arity:
                raise SyntaxError_(
                    f"arity mismatch: {tok} takes {arity} arguments, got {len(args)}"
                )
            return App(tok, tuple(args))
        if tok in self.sig.constants:
            if self.peek() == "(":
                raise SyntaxError_(f"constant {tok} takes no arguments")
            return Const(tok)
        raise SyntaxError_(f"unknown symbol: {tok}")

    def formula(self) -> Formula:
        tok = self.next()
        match tok:
            case "eq":
                return Eq(self.term(), self.term())
            case "mem":
                return Mem(self.term(), self.term())
            case "not":
                return Not(self.formula())
            case "imp":
                return Imp(self.formula(), self.formula())
            case "and":
                return And(self.formula(), self.formula())
            case "or":
                return Or(self.formula(), self.formula())
            case "iff":
                return Iff(self.formula(), self.formula())
            case "all":
                return All(self.variable(), self.formula())
            case "ex":
                return Ex(self.variable(), self.formula())
            case _:
                arity = self.sig.predicate_arity(tok)
                if arity is not None:
                    return Pred(tok, tuple(self.term() for _ in range(arity)))
                raise SyntaxError_(f"unknown formula keyword or predicate: {tok}")


def parse_term(text: str, sig: Signature = BASE) -> Term:
    tokens = tokenize(text)
    if not tokens:
        raise SyntaxError_("empty input")
    p = _Parser(tokens, sig)
    t = p.term()
    if p.peek() is not None:
        raise SyntaxError_(f"trailing tokens: {' '.join(tokens[p.pos:])}")
    return t


def parse_formula(text: str, sig: Signature = BASE) -> Formula:
    tokens = tokenize(text)
    if not tokens:
        raise SyntaxError_("empty input")
    p = _Parser(tokens, sig)
    f = p.formula()
    if p.peek() is not None:
        raise SyntaxError_(f"trailing tokens: {' '.join(tokens[p.pos:])}")
    return f


# ---------------------------------------------------------------------------
# Rendering

def render_term(t: Term) -> str:
    match t:
        case Var(i):
            return f"x{i}"
        case Const(name):
            return name
        case App(name, args):
            return f"{name}({' '.join(render_term(a) for a in args)})"
    raise TypeError(t)


def render_formula(f: Formula) -> str:
    match f:
        case Eq(l, r):
            return f"eq {render_term(l)} {render_term(r)}"
        case Mem(l, r):
            return f"mem {render_term(l)} {render_term(r)}"
        case Pred(name, args):
            return f"{name} {' '.join(render_term(a) for a in args)}"
        case Not(b):
            return f"not {render_formula(b)}"
        case Imp(l, r):
            return f"imp {render_formula(l)} {render_formula(r)}"
        case And(l, r):
            return f"and {render_formula(l)} {render_formula(r)}"
        case Or(l, r):
            return f"or {render_formula(l)} {render_formula(r)}"
        case Iff(l, r):
            return f"iff {render_formula(l)} {render_formula(r)}"
        case All(v, b):
            return f"all x{v.index} {render_formula(b)}"
        case Ex(v, b):
            return f"ex x{v.index} {render_formula(b)}"
    raise TypeError(f)
