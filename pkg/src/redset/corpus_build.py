"""Builders for the derivation corpus.

Each entry is a theory file plus a proof script; the scripts here are
generated from formula combinators, checked at build time, and written
out as plain text.  Lines tagged `# [n]` mirror the numbered steps of the
source derivations; untagged lines are bookkeeping (premise extraction,
equality reasoning, template applications).

Two entries, the intersection theorem and the subset-friendliness
consequences, are whole proof pipelines: an inner script is pushed
through the deduction transformation and constant generalization, and
the flattened primitive result is what lands in the file.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from . import kernel as K
from .files import parse_proof, render_proof, render_theory
from .kernel import Derived, ProofBuilder, check_proof, deduction_transform, generalize_constant
from .schemas import (
    Theory, extend_with_axiom, extend_with_constant, extend_with_function,
    instantiate_schema, rst, rst_ext,
)
from .syntax import (
    All, And, App, Const, Eq, Ex, Formula, Iff, Imp, Mem, Not, Or, Pred,
    Term, Var,
    parse_formula, render_formula,
)


def v(i: int) -> Var:
    return Var(i)


def _t(x) -> Term:
    return Var(x) if isinstance(x, int) else x


def mem(a, b) -> Formula:
    return Mem(_t(a), _t(b))


def eq(a, b) -> Formula:
    return Eq(_t(a), _t(b))


def sub(a, b) -> Formula:
    return Pred("sub", (_t(a), _t(b)))


def lam(x) -> Term:
    return App("lam", (_t(x),))


def mu(x) -> Term:
    return App("mu", (_t(x),))


def pw(x) -> Term:
    return App("pw", (_t(x),))


def pr(a, b) -> Term:
    return App("pr", (_t(a), _t(b)))


def un(x) -> Term:
    return App("un", (_t(x),))


@dataclass
class Entry:
    name: str
    label: str
    theory: Theory
    text: str
    paper_steps: int = 0
    note: str = ""


class Script:
    """Proof-file text under construction; step() returns 1-based indices."""

    def __init__(self, theory: Theory):
        self.theory = theory
        self.lines: list[str] = []
        self.formulas: list[Formula] = []
        self.marks = 0

    def step(self, formula: Formula, just: str, mark: Optional[str] = None) -> int:
        line = f"{len(self.lines) + 1}. {render_formula(formula)} ; {just}"
        if mark:
            line += f"  # [{mark}]"
            self.marks += 1
        self.lines.append(line)
        self.formulas.append(formula)
        return len(self.lines)

    def formula(self, idx: int) -> Formula:
        return self.formulas[idx - 1]

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


# ---------------------------------------------------------------------------
# Reusable blocks

def lem1a_lines(s: Script, u: Var, w: Var, y: Var) -> int:
    """iff (all y iff mem y u mem y w) (eq u w): extensionality both ways."""
    ext = s.step(
        Imp(All(y, Iff(mem(y, u), mem(y, w))), eq(u, w)),
        f"schema A1 x{u.index} x{w.index} x{y.index}",
    )
    c1 = s.step(Imp(eq(u, w), Imp(mem(y, u), mem(y, w))), "axeqcongr mem")
    c2 = s.step(Imp(eq(u, w), Imp(eq(u, u), eq(w, u))), "axeqcongr eq")
    r = s.step(eq(u, u), "axeqrefl")
    sym = s.step(Imp(eq(u, w), eq(w, u)), f"ded tautmp {c2} {r}")
    c3 = s.step(Imp(eq(w, u), Imp(mem(y, w), mem(y, u))), "axeqcongr mem")
    both = s.step(
        Imp(eq(u, w), Iff(mem(y, u), mem(y, w))), f"ded tautmp {c1} {sym} {c3}"
    )
    g = s.step(All(y, Imp(eq(u, w), Iff(mem(y, u), mem(y, w)))), f"gen x{y.index} {both}")
    p = s.step(Imp(eq(u, w), All(y, Iff(mem(y, u), mem(y, w)))), f"ded push_all {g}")
    return s.step(
        Iff(All(y, Iff(mem(y, u), mem(y, w))), eq(u, w)), f"ded tautmp {ext} {p}"
    )


def lem3_lines(s: Script, u: Var, w: Var, y: Var, f: Formula, marked: bool = False) -> int:
    """imp (all y iff mem y u f) imp (all y iff mem y w f) (eq u w)."""
    ext = lem1a_lines(s, u, w, y)
    pair = And(Iff(mem(y, u), f), Iff(mem(y, w), f))
    m = lambda lbl: lbl if marked else None
    p1 = s.step(Imp(pair, Iff(mem(y, u), mem(y, w))), "taut", m("1"))
    p2 = s.step(
        Imp(All(y, pair), All(y, Iff(mem(y, u), mem(y, w)))),
        f"ded all_mono {p1}",
        m("2"),
    )
    p3 = s.step(Imp(All(y, pair), eq(u, w)), f"ded tautmp {p2} {ext}", m("3"))
    both = And(All(y, Iff(mem(y, u), f)), All(y, Iff(mem(y, w), f)))
    p4a = s.step(Imp(both, All(y, pair)), "ded and_all")
    p4 = s.step(Imp(both, eq(u, w)), f"ded tautmp {p4a} {p3}", m("4"))
    return s.step(
        Imp(All(y, Iff(mem(y, u), f)), Imp(All(y, Iff(mem(y, w), f)), eq(u, w))),
        f"ded tautmp {p4}",
    )


def a5_conjuncts(u: Var, x: Var, y: Var, z: Var, vv: Var, w: Var, t: Var):
    """The four conjuncts of the base subset-friendliness axiom."""
    f1 = mem(x, u)
    f2 = All(y, Imp(mem(y, u), All(z, Imp(mem(z, y), mem(z, u)))))
    f3 = All(
        y,
        Imp(
            mem(y, u),
            Ex(z, And(mem(z, u), All(vv, Iff(mem(vv, z), All(w, Imp(mem(w, vv), mem(w, y))))))),
        ),
    )
    f4 = All(
        y,
        Imp(
            mem(y, u),
            All(
                z,
                Imp(
                    mem(z, u),
                    Ex(
                        vv,
                        And(
                            And(mem(vv, u), And(mem(y, vv), mem(z, vv))),
                            All(w, Imp(mem(w, vv), All(t, Imp(mem(t, w), mem(t, vv))))),
                        ),
                    ),
                ),
            ),
        ),
    )
    return f1, f2, f3, f4


def a5ext_conjuncts(u: Var, x: Var, y: Var, z: Var, vv: Var, w: Var):
    """The four conjuncts of the extended-language subset-friendliness form."""
    f1 = mem(x, u)
    f2 = All(y, Imp(mem(y, u), sub(y, u)))
    f3 = All(y, Imp(mem(y, u), mem(pw(y), u)))
    f4 = All(
        y,
        Imp(
            mem(y, u),
            All(
                z,
                Imp(
                    mem(z, u),
                    Ex(
                        vv,
                        And(
                            And(mem(vv, u), sub(pr(y, z), vv)),
                            All(w, Imp(mem(w, vv), sub(w, vv))),
                        ),
                    ),
                ),
            ),
        ),
    )
    return f1, f2, f3, f4


def conj4(f1, f2, f3, f4) -> Formula:
    return And(And(And(f1, f2), f3), f4)


# ---------------------------------------------------------------------------
# Template demonstration entries

def template_entries() -> list[Entry]:
    out = []
    base = rst()
    f1, f2 = mem(1, 2), mem(2, 1)

    def entry(rule: str, theory: Theory, build) -> None:
        s = Script(theory)
        build(s)
        out.append(Entry(f"tpl-{rule.replace('_', '-')}", f"template {rule}", theory, s.text()))

    entry("tautmp", extend_with_axiom(base, "prem", f1), lambda s: (
        s.step(f1, "basis prem"),
        s.step(Or(f1, f2), "ded tautmp 1"),
    ))
    entry("inst", extend_with_axiom(base, "prem", All(v(1), mem(1, 2))), lambda s: (
        s.step(All(v(1), mem(1, 2)), "basis prem"),
        s.step(mem(3, 2), "ded inst 1"),
    ))
    entry("gens", extend_with_axiom(base, "prem", f1), lambda s: (
        s.step(f1, "basis prem"),
        s.step(All(v(2), All(v(1), f1)), "ded gens 1"),
    ))
    entry("push_all", extend_with_axiom(base, "prem", Imp(mem(1, 2), mem(2, 3))), lambda s: (
        s.step(Imp(mem(1, 2), mem(2, 3)), "basis prem"),
        s.step(Imp(mem(1, 2), All(v(3), mem(2, 3))), "ded push_all 1"),
    ))
    entry("strip_all", extend_with_axiom(base, "prem", Imp(mem(1, 2), All(v(3), mem(3, 2)))), lambda s: (
        s.step(Imp(mem(1, 2), All(v(3), mem(3, 2))), "basis prem"),
        s.step(Imp(mem(1, 2), mem(4, 2)), "ded strip_all 1"),
    ))
    entry("alldist", base, lambda s: s.step(
        Imp(All(v(1), Imp(mem(1, 2), mem(2, 1))), Imp(All(v(1), mem(1, 2)), All(v(1), mem(2, 1)))),
        "ded alldist",
    ))
    entry("exdist", base, lambda s: s.step(
        Imp(All(v(1), Imp(mem(1, 2), mem(2, 1))), Imp(Ex(v(1), mem(1, 2)), Ex(v(1), mem(2, 1)))),
        "ded exdist",
    ))
    entry("and_all", base, lambda s: s.step(
        Imp(And(All(v(1), mem(1, 2)), All(v(1), mem(1, 3))), All(v(1), And(mem(1, 2), mem(1, 3)))),
        "ded and_all",
    ))
    entry("ex_elim", extend_with_axiom(base, "prem", All(v(1), Imp(mem(1, 2), Ex(v(3), mem(3, 2))))), lambda s: (
        s.step(All(v(1), Imp(mem(1, 2), Ex(v(3), mem(3, 2)))), "basis prem"),
        s.step(Imp(Ex(v(1), mem(1, 2)), Ex(v(3), mem(3, 2))), "ded ex_elim 1"),
    ))
    entry("ex_imp", extend_with_axiom(base, "prem", Ex(v(1), Imp(mem(2, 3), mem(1, 3)))), lambda s: (
        s.step(Ex(v(1), Imp(mem(2, 3), mem(1, 3))), "basis prem"),
        s.step(Imp(mem(2, 3), Ex(v(1), mem(1, 3))), "ded ex_imp 1"),
    ))
    entry("ex_intro", extend_with_axiom(base, "prem", mem(2, 3)), lambda s: (
        s.step(mem(2, 3), "basis prem"),
        s.step(Ex(v(1), mem(1, 3)), "ded ex_intro 1"),
    ))
    entry("all_mono", extend_with_axiom(base, "prem", Imp(f1, f2)), lambda s: (
        s.step(Imp(f1, f2), "basis prem"),
        s.step(Imp(All(v(1), f1), All(v(1), f2)), "ded all_mono 1"),
    ))
    entry("ex_mono", extend_with_axiom(base, "prem", Imp(f1, f2)), lambda s: (
        s.step(Imp(f1, f2), "basis prem"),
        s.step(Imp(Ex(v(1), f1), Ex(v(1), f2)), "ded ex_mono 1"),
    ))
    entry("exall_mono", extend_with_axiom(base, "prem", Imp(f1, f2)), lambda s: (
        s.step(Imp(f1, f2), "basis prem"),
        s.step(Imp(Ex(v(3), All(v(1), f1)), Ex(v(3), All(v(1), f2))), "ded exall_mono 1"),
    ))
    entry("rename_iff", base, lambda s: s.step(
        Iff(All(v(1), mem(1, 2)), All(v(3), mem(3, 2))), "ded rename_iff",
    ))
    entry("equiv_replace", base, lambda s: (
        s.step(Iff(Ex(v(1), mem(1, 2)), Not(All(v(1), Not(mem(1, 2))))), "axexdef"),
        s.step(
            Iff(All(v(2), Ex(v(1), mem(1, 2))), All(v(2), Not(All(v(1), Not(mem(1, 2)))))),
            "ded equiv_replace 1",
        ),
    ))
    entry("subset_instance", base, lambda s: s.step(
        Ex(v(1), All(v(3), Iff(mem(3, 1), And(mem(3, 2), mem(3, 2))))),
        "ded subset_instance",
    ))
    entry("lem4", base, lambda s: s.step(
        Iff(
            Ex(v(1), All(v(2), Imp(mem(2, 3), mem(2, 1)))),
            Ex(v(1), All(v(2), Iff(mem(2, 1), mem(2, 3)))),
        ),
        "ded lem4",
    ))
    th = extend_with_axiom(base, "exf", Ex(v(1), mem(2, 1)))
    th = extend_with_axiom(th, "allfg", All(v(1), Imp(mem(2, 1), Ex(v(3), mem(3, 1)))))
    entry("stronger_exists", th, lambda s: (
        s.step(Ex(v(1), mem(2, 1)), "basis exf"),
        s.step(All(v(1), Imp(mem(2, 1), Ex(v(3), mem(3, 1)))), "basis allfg"),
        s.step(Ex(v(1), And(mem(2, 1), Ex(v(3), mem(3, 1)))), "ded stronger_exists 1 2"),
    ))
    return out


# ---------------------------------------------------------------------------
# Named derivations

def entry_lem1a() -> Entry:
    s = Script(rst())
    lem1a_lines(s, v(1), v(2), v(3))
    return Entry("lem1a", "lem1(a)", s.theory, s.text(),
                 note="extensionality as an equivalence, from A1 and the equality axioms")


def entry_lem2() -> Entry:
    f1, f2 = mem(2, 1), Ex(v(3), mem(3, 1))
    theory = extend_with_axiom(rst(), "prem", Imp(f1, f2))
    s = Script(theory)
    p = s.step(Imp(f1, f2), "basis prem")
    g = s.step(All(v(2), Imp(f1, f2)), f"gen x2 {p}", "1")
    d1 = s.step(
        Imp(All(v(2), Imp(f1, f2)), Imp(All(v(2), f1), All(v(2), f2))), "ded alldist", "2"
    )
    m1 = s.step(Imp(All(v(2), f1), All(v(2), f2)), f"mp {g} {d1}", "3")
    d2 = s.step(
        Imp(All(v(2), Imp(f1, f2)), Imp(Ex(v(2), f1), Ex(v(2), f2))), "ded exdist", "4"
    )
    s.step(Imp(Ex(v(2), f1), Ex(v(2), f2)), f"mp {g} {d2}", "5")
    s.step(
        Imp(Ex(v(4), All(v(2), f1)), Ex(v(4), All(v(2), f2))), f"ded ex_mono {m1}", "6"
    )
    return Entry("lem2", "lem2", theory, s.text(), paper_steps=6)


def entry_lem3() -> Entry:
    s = Script(rst())
    lem3_lines(s, v(1), v(2), v(3), Not(mem(3, 3)), marked=True)
    return Entry("lem3", "lem3", s.theory, s.text(), paper_steps=4)


def entry_lem4() -> Entry:
    s = Script(rst())
    u, y, w = v(1), v(2), v(3)
    f = Not(mem(2, 2))
    myu, myw = mem(y, u), mem(y, w)
    p1 = s.step(
        Imp(Iff(myu, And(myw, f)), Imp(Imp(f, myw), Iff(myu, f))), "taut", "1"
    )
    p2 = s.step(
        Imp(All(y, Iff(myu, And(myw, f))), All(y, Imp(Imp(f, myw), Iff(myu, f)))),
        f"ded all_mono {p1}", "2",
    )
    p3 = s.step(
        Imp(
            All(y, Imp(Imp(f, myw), Iff(myu, f))),
            Imp(All(y, Imp(f, myw)), All(y, Iff(myu, f))),
        ),
        "ded alldist", "3",
    )
    p4 = s.step(
        Imp(All(y, Iff(myu, And(myw, f))), Imp(All(y, Imp(f, myw)), All(y, Iff(myu, f)))),
        f"ded tautmp {p2} {p3}", "4",
    )
    p5 = s.step(
        Imp(
            Ex(u, All(y, Iff(myu, And(myw, f)))),
            Ex(u, Imp(All(y, Imp(f, myw)), All(y, Iff(myu, f)))),
        ),
        f"ded ex_mono {p4}", "5",
    )
    p6 = s.step(
        Ex(u, All(y, Iff(myu, And(myw, f)))), "ded subset_instance", "6"
    )
    p7 = s.step(
        Ex(u, Imp(All(y, Imp(f, myw)), All(y, Iff(myu, f)))), f"mp {p6} {p5}", "7"
    )
    p8 = s.step(
        Imp(All(y, Imp(f, myw)), Ex(u, All(y, Iff(myu, f)))), f"ded ex_imp {p7}", "8"
    )
    p9 = s.step(
        Imp(All(y, Imp(f, myu)), Ex(u, All(y, Iff(myu, f)))), f"subst {p8} x3 x1", "9"
    )
    p10 = s.step(
        All(u, Imp(All(y, Imp(f, myu)), Ex(u, All(y, Iff(myu, f))))), f"gen x1 {p9}", "10"
    )
    p11 = s.step(
        Imp(Ex(u, All(y, Imp(f, myu))), Ex(u, All(y, Iff(myu, f)))),
        f"ded ex_elim {p10}", "11",
    )
    p12 = s.step(
        Imp(Ex(u, All(y, Iff(myu, f))), Ex(u, All(y, Imp(f, myu)))),
        "ded exall_mono", "12",
    )
    s.step(
        Iff(Ex(u, All(y, Imp(f, myu))), Ex(u, All(y, Iff(myu, f)))),
        f"ded tautmp {p11} {p12}",
    )
    return Entry("lem4", "lem4", s.theory, s.text(), paper_steps=12)


def entry_const_erw() -> Entry:
    theory = extend_with_constant(rst(), "c")
    s = Script(theory)
    c = Const("c")
    a = s.step(
        Ex(v(1), All(v(3), Iff(mem(3, 1), And(mem(3, 2), mem(3, v(4)))))),
        "schema A2 x1 x2 x3 with mem x3 x4", "1",
    )
    s.step(
        Ex(v(1), All(v(3), Iff(mem(3, 1), And(mem(3, 2), mem(v(3), c))))),
        f"subst {a} x4 c", "2",
    )
    return Entry(
        "const-erw", "const_erw", theory, s.text(), paper_steps=2,
        note="subset instances survive new constants: prove with a fresh variable, substitute the constant",
    )


def entry_nice_e1() -> Entry:
    s = Script(rst())
    f = Not(mem(2, 3))
    inst = Ex(v(1), All(v(2), Iff(mem(2, 1), And(mem(2, 3), f))))
    goal = Ex(v(1), All(v(2), Not(mem(2, 1))))
    p1 = s.step(inst, "ded subset_instance", "1")
    p2 = s.step(Iff(Iff(mem(2, 1), And(mem(2, 3), f)), Not(mem(2, 1))), "taut", "2")
    p3 = s.step(Iff(inst, goal), f"ded equiv_replace {p2}", "3")
    s.step(goal, f"ded tautmp {p1} {p3}", "4")
    return Entry("nice-e1", "nice_axioms(a)", s.theory, s.text(), paper_steps=4)


def entry_e3_pre() -> Entry:
    s = Script(rst())
    f1, f2, f3, f4 = a5_conjuncts(v(1), v(2), v(3), v(4), v(5), v(6), v(7))
    a5 = s.step(Ex(v(1), conj4(f1, f2, f3, f4)), "schema A5 x1 x2 x3 x4 x5 x6 x7")
    tt = s.step(Imp(conj4(f1, f2, f3, f4), And(f1, f2)), "taut")
    lift = s.step(
        Imp(Ex(v(1), conj4(f1, f2, f3, f4)), Ex(v(1), And(f1, f2))), f"ded ex_mono {tt}"
    )
    s.step(Ex(v(1), And(f1, f2)), f"mp {a5} {lift}")
    return Entry(
        "e3-pre", "nice_axioms E3 premise", s.theory, s.text(),
        note="existence of a transitive superset, from A5 by weakening",
    )


def _lambda_theory() -> Theory:
    theory = extend_with_function(rst(), "lam", 1)
    lam_def = And(
        mem(2, lam(2)),
        All(v(4), Imp(mem(4, lam(2)), All(v(3), Imp(mem(3, 4), mem(3, lam(2)))))),
    )
    return extend_with_axiom(theory, "lambda-def", lam_def)


def _e3_item_lines(s: Script) -> int:
    base = s.step(
        And(
            mem(2, lam(2)),
            All(v(4), Imp(mem(4, lam(2)), All(v(3), Imp(mem(3, 4), mem(3, lam(2)))))),
        ),
        "basis lambda-def", "1",
    )
    i2 = s.step(mem(2, lam(2)), f"ded tautmp {base}", "2")
    i3 = s.step(
        All(v(4), Imp(mem(4, lam(2)), All(v(3), Imp(mem(3, 4), mem(3, lam(2)))))),
        f"ded tautmp {base}", "3",
    )
    i4 = s.step(
        Imp(mem(4, lam(2)), All(v(3), Imp(mem(3, 4), mem(3, lam(2))))),
        f"ded inst {i3}", "4",
    )
    i5 = s.step(
        Imp(mem(2, lam(2)), All(v(3), Imp(mem(3, 2), mem(3, lam(2))))),
        f"ded inst {i3}", "5",
    )
    i6 = s.step(All(v(3), Imp(mem(3, 2), mem(3, lam(2)))), f"mp {i2} {i5}", "6")
    i7 = s.step(Imp(mem(4, 2), mem(4, lam(2))), f"ded inst {i6}", "7")
    i8 = s.step(
        Imp(mem(4, lam(2)), Imp(mem(3, 4), mem(3, lam(2)))), f"ded strip_all {i4}", "8"
    )
    i9 = s.step(
        Imp(And(mem(3, 4), mem(4, 2)), mem(3, lam(2))), f"ded tautmp {i7} {i8}", "9"
    )
    i10 = s.step(
        All(v(3), All(v(4), Imp(And(mem(3, 4), mem(4, 2)), mem(3, lam(2))))),
        f"ded gens {i9}", "10",
    )
    i11 = s.step(
        All(v(3), Imp(Ex(v(4), And(mem(3, 4), mem(4, 2))), mem(3, lam(2)))),
        f"ded ex_elim {i10}", "11",
    )
    return s.step(
        Ex(v(1), All(v(3), Imp(Ex(v(4), And(mem(3, 4), mem(4, 2))), mem(3, 1)))),
        f"ded ex_intro {i11}", "12",
    )


def entry_nice_e3() -> Entry:
    s = Script(_lambda_theory())
    _e3_item_lines(s)
    return Entry(
        "nice-e3", "nice_axioms E3", s.theory, s.text(), paper_steps=12,
        note="scratch function lam witnesses the transitive superset from e3-pre",
    )


def entry_union_exists() -> Entry:
    s = Script(_lambda_theory())
    i12 = _e3_item_lines(s)
    body = Ex(v(4), And(mem(3, 4), mem(4, 2)))
    i13 = s.step(
        Iff(
            Ex(v(1), All(v(3), Imp(body, mem(3, 1)))),
            Ex(v(1), All(v(3), Iff(mem(3, 1), body))),
        ),
        "ded lem4",
    )
    s.step(Ex(v(1), All(v(3), Iff(mem(3, 1), body))), f"ded tautmp {i12} {i13}")
    return Entry(
        "union-exists", "nice_axioms(b)", s.theory, s.text(),
        note="union set existence; discharges the un definition's existence obligation",
    )


def entry_nice_e4() -> Entry:
    s = Script(rst())
    p1 = s.step(Ex(v(1), And(mem(2, 1), mem(3, 1))), "schema A4 x1 x2 x3", "1")
    p2 = s.step(Ex(v(1), mem(2, 1)), f"ded ex_mono {p1}", "2")
    a1 = s.step(Imp(eq(3, 2), Imp(eq(3, 3), eq(2, 3))), "axeqcongr eq")
    a2 = s.step(eq(3, 3), "axeqrefl")
    a3 = s.step(Imp(eq(2, 3), Imp(mem(2, 1), mem(3, 1))), "axeqcongr mem")
    p3 = s.step(
        Imp(mem(2, 1), Imp(eq(3, 2), mem(3, 1))), f"ded tautmp {a1} {a2} {a3}", "3"
    )
    p4 = s.step(All(v(3), Imp(mem(2, 1), Imp(eq(3, 2), mem(3, 1)))), f"gen x3 {p3}", "4")
    p5 = s.step(
        Imp(mem(2, 1), All(v(3), Imp(eq(3, 2), mem(3, 1)))), f"ded push_all {p4}", "5"
    )
    p6 = s.step(
        Imp(Ex(v(1), mem(2, 1)), Ex(v(1), All(v(3), Imp(eq(3, 2), mem(3, 1))))),
        f"ded ex_mono {p5}", "6",
    )
    p7 = s.step(Ex(v(1), All(v(3), Imp(eq(3, 2), mem(3, 1)))), f"mp {p2} {p6}", "7")
    s.step(Ex(v(1), All(v(3), Iff(mem(3, 1), eq(3, 2)))), f"ded lem4 {p7}", "8")
    return Entry("nice-e4", "nice_axioms E4", s.theory, s.text(), paper_steps=8)


def entry_nice_e5() -> Entry:
    s = Script(rst())
    p1 = s.step(Ex(v(1), And(mem(2, 1), mem(3, 1))), "schema A4 x1 x2 x3", "1")
    b1 = s.step(Imp(eq(4, 2), Imp(eq(4, 4), eq(2, 4))), "axeqcongr eq")
    b2 = s.step(eq(4, 4), "axeqrefl")
    b3 = s.step(Imp(eq(2, 4), Imp(mem(2, 1), mem(4, 1))), "axeqcongr mem")
    b4 = s.step(Imp(eq(4, 3), Imp(eq(4, 4), eq(3, 4))), "axeqcongr eq")
    b5 = s.step(Imp(eq(3, 4), Imp(mem(3, 1), mem(4, 1))), "axeqcongr mem")
    disj = Or(eq(4, 2), eq(4, 3))
    p2 = s.step(
        Imp(And(mem(2, 1), mem(3, 1)), Imp(disj, mem(4, 1))),
        f"ded tautmp {b1} {b2} {b3} {b4} {b5}", "2",
    )
    p3 = s.step(
        Imp(And(mem(2, 1), mem(3, 1)), All(v(4), Imp(disj, mem(4, 1)))),
        f"ded push_all {p2}", "3",
    )
    p4 = s.step(
        Imp(
            Ex(v(1), And(mem(2, 1), mem(3, 1))),
            Ex(v(1), All(v(4), Imp(disj, mem(4, 1)))),
        ),
        f"ded ex_mono {p3}", "4",
    )
    p5 = s.step(Ex(v(1), All(v(4), Imp(disj, mem(4, 1)))), f"mp {p1} {p4}", "5")
    s.step(Ex(v(1), All(v(4), Iff(mem(4, 1), disj))), f"ded lem4 {p5}", "6")
    return Entry("nice-e5", "nice_axioms E5", s.theory, s.text(), paper_steps=6)


def entry_e6_pre() -> Entry:
    s = Script(rst())
    f1, f2, f3, f4 = a5_conjuncts(v(1), v(2), v(3), v(4), v(5), v(6), v(7))
    a5 = s.step(Ex(v(1), conj4(f1, f2, f3, f4)), "schema A5 x1 x2 x3 x4 x5 x6 x7")
    tt = s.step(Imp(conj4(f1, f2, f3, f4), And(f1, f3)), "taut")
    lift = s.step(
        Imp(Ex(v(1), conj4(f1, f2, f3, f4)), Ex(v(1), And(f1, f3))), f"ded ex_mono {tt}"
    )
    s.step(Ex(v(1), And(f1, f3)), f"mp {a5} {lift}")
    return Entry(
        "e6-pre", "nice_axioms E6 premise", s.theory, s.text(),
        note="existence of a power-set-closed superset, from A5 by weakening",
    )


def _char(zv, yv) -> Formula:
    """zv collects exactly the subsets of yv."""
    return All(v(3), Iff(mem(3, zv), All(v(4), Imp(mem(4, 3), mem(4, yv)))))


def entry_nice_e6() -> Entry:
    theory = extend_with_function(rst(), "mu", 1)
    mu_def = And(
        mem(2, mu(2)),
        All(v(5), Imp(mem(5, mu(2)), Ex(v(1), And(mem(1, mu(2)), _char(v(1), v(5)))))),
    )
    theory = extend_with_axiom(theory, "mu-def", mu_def)
    s = Script(theory)
    base = s.step(mu_def, "basis mu-def", "1")
    i2 = s.step(mem(2, mu(2)), f"ded tautmp {base}", "2")
    i3 = s.step(
        All(v(5), Imp(mem(5, mu(2)), Ex(v(1), And(mem(1, mu(2)), _char(v(1), v(5)))))),
        f"ded tautmp {base}", "3",
    )
    i4 = s.step(
        Imp(mem(2, mu(2)), Ex(v(1), And(mem(1, mu(2)), _char(v(1), v(2))))),
        f"ded inst {i3}", "4",
    )
    i5 = s.step(Ex(v(1), And(mem(1, mu(2)), _char(v(1), v(2)))), f"mp {i2} {i4}", "5")
    s.step(Ex(v(1), _char(v(1), v(2))), f"ded ex_mono {i5}", "6")
    return Entry(
        "nice-e6", "nice_axioms(d)", theory, s.text(), paper_steps=6,
        note="power set existence; discharges the pw definition's existence obligation",
    )


def _uniq_entry(name: str, label: str, defn_schema: str) -> Entry:
    ext = rst_ext()
    d = next(c for c in ext.chain if c.schema_id == defn_schema)
    body = d.body
    match body:
        case All(y, Iff(Mem(_, _), f)):
            pass
        case _:
            raise AssertionError("definition body is not a membership characterization")
    from .syntax import all_vars, fresh_var

    u = d.value_var
    w = fresh_var(all_vars(body) | {u, *d.arg_vars})
    s = Script(rst())
    lem3_lines(s, u, w, y, f)
    return Entry(name, label, s.theory, s.text(),
                 note=f"uniqueness obligation for {d.symbol}")


def entry_uniq_e1() -> Entry:
    s = Script(rst())
    f0 = And(mem(2, 2), Not(mem(2, 2)))
    target_l = All(v(2), Not(mem(2, 1)))
    target_r = All(v(2), Not(mem(2, 3)))
    l3 = lem3_lines(s, v(1), v(3), v(2), f0)
    t1 = s.step(Iff(Iff(mem(2, 1), f0), Not(mem(2, 1))), "taut")
    r1 = s.step(
        Iff(All(v(2), Iff(mem(2, 1), f0)), target_l), f"ded equiv_replace {t1}"
    )
    t2 = s.step(Iff(Iff(mem(2, 3), f0), Not(mem(2, 3))), "taut")
    r2 = s.step(
        Iff(All(v(2), Iff(mem(2, 3), f0)), target_r), f"ded equiv_replace {t2}"
    )
    s.step(
        Imp(target_l, Imp(target_r, eq(1, 3))), f"ded tautmp {l3} {r1} {r2}"
    )
    return Entry("uniq-e1", "conserv1(b) uniqueness for O", s.theory, s.text(),
                 note="uniqueness obligation for O")


# ---------------------------------------------------------------------------
# The inductive-set groundwork: S1..S15 and the folgerungen pipeline

def _sf_theory() -> tuple[Theory, Formula, Formula, Formula, Formula]:
    """rst_ext + constants c, d + the packaged subset-friendliness axiom."""
    theory = extend_with_constant(extend_with_constant(rst_ext(), "c"), "d")
    c, d = Const("c"), Const("d")
    f1, f2, f3, f4 = a5ext_conjuncts(v(1), v(2), v(3), v(4), v(5), v(6))

    def cd(f: Formula) -> Formula:
        from .syntax import substitute_parallel
        return substitute_parallel(f, {v(1): d, v(2): c})

    sfcd = conj4(cd(f1), cd(f2), cd(f3), cd(f4))
    theory = extend_with_axiom(theory, "sf-cd", sfcd)
    return theory, cd(f1), cd(f2), cd(f3), cd(f4)


def entry_nice_e_s() -> Entry:
    theory, f1cd, f2cd, f3cd, f4cd = _sf_theory()
    c, d = Const("c"), Const("d")
    s = Script(theory)

    def term_text(t: Term) -> str:
        from .syntax import render_term
        return render_term(t)

    base = s.step(conj4(f1cd, f2cd, f3cd, f4cd), "basis sf-cd")
    s1 = s.step(mem(c, d), f"ded tautmp {base}", "S1")
    a_f2 = s.step(f2cd, f"ded tautmp {base}")
    s2 = s.step(Imp(mem(3, d), sub(3, d)), f"ded inst {a_f2}", "S2")
    a_f3 = s.step(f3cd, f"ded tautmp {base}")
    s3 = s.step(Imp(mem(3, d), mem(pw(3), d)), f"ded inst {a_f3}", "S3")
    a_f4 = s.step(f4cd, f"ded tautmp {base}")
    exv = Ex(v(5), And(And(mem(5, d), sub(pr(3, 4), 5)), All(v(6), Imp(mem(6, 5), sub(6, 5)))))
    a_f4i = s.step(Imp(mem(3, d), All(v(4), Imp(mem(4, d), exv))), f"ded inst {a_f4}")
    s4 = s.step(Imp(mem(3, d), Imp(mem(4, d), exv)), f"ded strip_all {a_f4i}", "S4")

    # S5: subsets of a set are members of its power set
    e6 = s.step(
        Iff(eq(v(9), pw(3)), All(v(10), Iff(mem(10, 9), All(v(11), Imp(mem(11, 10), mem(11, 3)))))),
        "schema E6 x9 x3 x10 x11",
    )
    e6s = s.step(
        Iff(eq(pw(3), pw(3)), All(v(10), Iff(mem(10, pw(3)), All(v(11), Imp(mem(11, 10), mem(11, 3)))))),
        f"subst {e6} x9 {term_text(pw(3))}",
    )
    rfl = s.step(eq(pw(3), pw(3)), "axeqrefl")
    pchar = s.step(
        All(v(10), Iff(mem(10, pw(3)), All(v(11), Imp(mem(11, 10), mem(11, 3))))),
        f"ded tautmp {rfl} {e6s}",
    )
    pchar7 = s.step(
        Iff(mem(7, pw(3)), All(v(11), Imp(mem(11, 7), mem(11, 3)))), f"ded inst {pchar}"
    )
    e2a = s.step(
        Iff(sub(7, 3), All(v(11), Imp(mem(11, 7), mem(11, 3)))), "schema E2 x7 x3 x11"
    )
    s5 = s.step(Imp(sub(7, 3), mem(7, pw(3))), f"ded tautmp {pchar7} {e2a}", "S5")

    s6 = s.step(
        Imp(mem(pw(3), d), sub(pw(3), d)), f"subst {s2} x3 {term_text(pw(3))}", "S6"
    )

    # S7: subsets of members are members
    e2b = s.step(
        Iff(sub(v(9), v(10)), All(v(11), Imp(mem(11, 9), mem(11, 10)))),
        "schema E2 x9 x10 x11",
    )
    e2b1 = s.step(
        Iff(sub(pw(3), v(10)), All(v(11), Imp(mem(11, pw(3)), mem(11, 10)))),
        f"subst {e2b} x9 {term_text(pw(3))}",
    )
    e2b2 = s.step(
        Iff(sub(pw(3), d), All(v(11), Imp(mem(11, pw(3)), mem(11, d)))),
        f"subst {e2b1} x10 d",
    )
    e2inst = s.step(
        Imp(
            All(v(11), Imp(mem(11, pw(3)), mem(11, d))),
            Imp(mem(7, pw(3)), mem(7, d)),
        ),
        "axsubst",
    )
    s7 = s.step(
        Imp(sub(7, 3), Imp(mem(3, d), mem(7, d))),
        f"ded tautmp {s5} {s3} {s6} {e2b2} {e2inst}", "S7",
    )

    # S8: instances for the pair term
    s7t = s.step(Imp(sub(7, 8), Imp(mem(8, d), mem(7, d))), f"subst {s7} x3 x8")
    s7p = s.step(
        Imp(sub(pr(3, 4), 8), Imp(mem(8, d), mem(pr(3, 4), d))),
        f"subst {s7t} x7 {term_text(pr(3, 4))}",
    )
    s8 = s.step(
        All(v(8), Imp(sub(pr(3, 4), 8), Imp(mem(8, d), mem(pr(3, 4), d)))),
        f"gen x8 {s7p}", "S8",
    )

    # S9: the pair of two members is a member
    kf = And(And(mem(5, d), sub(pr(3, 4), 5)), All(v(6), Imp(mem(6, 5), sub(6, 5))))
    a9 = s.step(
        Imp(sub(pr(3, 4), 5), Imp(mem(5, d), mem(pr(3, 4), d))), f"ded inst {s8}"
    )
    b9 = s.step(Imp(kf, mem(pr(3, 4), d)), f"ded tautmp {a9}")
    c9 = s.step(All(v(5), Imp(kf, mem(pr(3, 4), d))), f"gen x5 {b9}")
    d9 = s.step(Imp(Ex(v(5), kf), mem(pr(3, 4), d)), f"ded ex_elim {c9}")
    s9 = s.step(
        Imp(mem(3, d), Imp(mem(4, d), mem(pr(3, 4), d))), f"ded tautmp {s4} {d9}", "S9"
    )

    # S10: the transitive cover also includes the union of the pair
    P, UP = pr(3, 4), un(pr(3, 4))
    wv = All(v(6), Imp(mem(6, 5), sub(6, 5)))
    kfp = And(And(mem(5, d), sub(UP, 5)), wv)
    hp = s.step(
        Iff(sub(v(9), v(10)), All(v(11), Imp(mem(11, 9), mem(11, 10)))),
        "schema E2 x9 x10 x11",
    )
    hp1 = s.step(
        Iff(sub(P, v(10)), All(v(11), Imp(mem(11, P), mem(11, 10)))),
        f"subst {hp} x9 {term_text(P)}",
    )
    hpi = s.step(
        Iff(sub(P, 5), All(v(11), Imp(mem(11, P), mem(11, 5)))), f"subst {hp1} x10 x5"
    )
    up1 = s.step(
        Iff(sub(v(10), v(11)), All(v(9), Imp(mem(9, 10), mem(9, 11)))),
        "schema E2 x10 x11 x9",
    )
    up2 = s.step(
        Iff(sub(UP, v(11)), All(v(9), Imp(mem(9, UP), mem(9, 11)))),
        f"subst {up1} x10 {term_text(UP)}",
    )
    upi = s.step(
        Iff(sub(UP, 5), All(v(9), Imp(mem(9, UP), mem(9, 5)))), f"subst {up2} x11 x5"
    )
    e5 = s.step(
        Iff(eq(v(9), P), All(v(11), Iff(mem(11, 9), Or(eq(11, 3), eq(11, 4))))),
        "schema E5 x9 x3 x4 x11",
    )
    e5s = s.step(
        Iff(eq(P, P), All(v(11), Iff(mem(11, P), Or(eq(11, 3), eq(11, 4))))),
        f"subst {e5} x9 {term_text(P)}",
    )
    rfl2 = s.step(eq(P, P), "axeqrefl")
    memp = s.step(
        All(v(11), Iff(mem(11, P), Or(eq(11, 3), eq(11, 4)))), f"ded tautmp {rfl2} {e5s}"
    )
    e3c = s.step(
        Iff(eq(v(9), un(v(10))), All(v(11), Iff(mem(11, 9), Ex(v(12), And(mem(11, 12), mem(12, 10)))))),
        "schema E3 x9 x10 x11 x12",
    )
    e3c1 = s.step(
        Iff(eq(v(9), UP), All(v(11), Iff(mem(11, 9), Ex(v(12), And(mem(11, 12), mem(12, P)))))),
        f"subst {e3c} x10 {term_text(P)}",
    )
    e3c2 = s.step(
        Iff(eq(UP, UP), All(v(11), Iff(mem(11, UP), Ex(v(12), And(mem(11, 12), mem(12, P)))))),
        f"subst {e3c1} x9 {term_text(UP)}",
    )
    rfl3 = s.step(eq(UP, UP), "axeqrefl")
    memup = s.step(
        All(v(11), Iff(mem(11, UP), Ex(v(12), And(mem(11, 12), mem(12, P))))),
        f"ded tautmp {rfl3} {e3c2}",
    )
    memup9 = s.step(
        Iff(mem(9, UP), Ex(v(12), And(mem(9, 12), mem(12, P)))), f"ded inst {memup}"
    )
    memp12 = s.step(
        Iff(mem(12, P), Or(eq(12, 3), eq(12, 4))), f"ded inst {memp}"
    )
    cg3 = s.step(Imp(eq(12, 3), Imp(mem(9, 12), mem(9, 3))), "axeqcongr mem")
    cg4 = s.step(Imp(eq(12, 4), Imp(mem(9, 12), mem(9, 4))), "axeqcongr mem")
    memp3 = s.step(Iff(mem(3, P), Or(eq(3, 3), eq(3, 4))), f"ded inst {memp}")
    rf3 = s.step(eq(3, 3), "axeqrefl")
    hpinst3 = s.step(
        Imp(All(v(11), Imp(mem(11, P), mem(11, 5))), Imp(mem(3, P), mem(3, 5))),
        "axsubst",
    )
    l1 = s.step(
        Imp(sub(P, 5), mem(3, 5)), f"ded tautmp {hpi} {hpinst3} {memp3} {rf3}"
    )
    memp4 = s.step(Iff(mem(4, P), Or(eq(4, 3), eq(4, 4))), f"ded inst {memp}")
    rf4 = s.step(eq(4, 4), "axeqrefl")
    hpinst4 = s.step(
        Imp(All(v(11), Imp(mem(11, P), mem(11, 5))), Imp(mem(4, P), mem(4, 5))),
        "axsubst",
    )
    l2 = s.step(
        Imp(sub(P, 5), mem(4, 5)), f"ded tautmp {hpi} {hpinst4} {memp4} {rf4}"
    )
    winst3 = s.step(Imp(wv, Imp(mem(3, 5), sub(3, 5))), "axsubst")
    e2x3 = s.step(
        Iff(sub(3, 5), All(v(11), Imp(mem(11, 3), mem(11, 5)))), "schema E2 x3 x5 x11"
    )
    e2x3i = s.step(
        Imp(All(v(11), Imp(mem(11, 3), mem(11, 5))), Imp(mem(9, 3), mem(9, 5))),
        "axsubst",
    )
    l3 = s.step(
        Imp(wv, Imp(mem(3, 5), Imp(mem(9, 3), mem(9, 5)))),
        f"ded tautmp {winst3} {e2x3} {e2x3i}",
    )
    winst4 = s.step(Imp(wv, Imp(mem(4, 5), sub(4, 5))), "axsubst")
    e2x4 = s.step(
        Iff(sub(4, 5), All(v(11), Imp(mem(11, 4), mem(11, 5)))), "schema E2 x4 x5 x11"
    )
    e2x4i = s.step(
        Imp(All(v(11), Imp(mem(11, 4), mem(11, 5))), Imp(mem(9, 4), mem(9, 5))),
        "axsubst",
    )
    l4 = s.step(
        Imp(wv, Imp(mem(4, 5), Imp(mem(9, 4), mem(9, 5)))),
        f"ded tautmp {winst4} {e2x4} {e2x4i}",
    )
    l5 = s.step(
        Imp(sub(P, 5), Imp(wv, Imp(eq(12, 3), Imp(mem(9, 12), mem(9, 5))))),
        f"ded tautmp {l1} {l3} {cg3}",
    )
    l6 = s.step(
        Imp(sub(P, 5), Imp(wv, Imp(eq(12, 4), Imp(mem(9, 12), mem(9, 5))))),
        f"ded tautmp {l2} {l4} {cg4}",
    )
    l7 = s.step(
        Imp(sub(P, 5), Imp(wv, Imp(And(mem(9, 12), mem(12, P)), mem(9, 5)))),
        f"ded tautmp {l5} {l6} {memp12}",
    )
    l8 = s.step(
        Imp(And(mem(9, 12), mem(12, P)), Imp(sub(P, 5), Imp(wv, mem(9, 5)))),
        f"ded tautmp {l7}",
    )
    l9 = s.step(
        All(v(12), Imp(And(mem(9, 12), mem(12, P)), Imp(sub(P, 5), Imp(wv, mem(9, 5))))),
        f"gen x12 {l8}",
    )
    l10 = s.step(
        Imp(Ex(v(12), And(mem(9, 12), mem(12, P))), Imp(sub(P, 5), Imp(wv, mem(9, 5)))),
        f"ded ex_elim {l9}",
    )
    l11 = s.step(
        Imp(And(sub(P, 5), wv), Imp(mem(9, UP), mem(9, 5))),
        f"ded tautmp {l10} {memup9}",
    )
    l13 = s.step(
        Imp(And(sub(P, 5), wv), All(v(9), Imp(mem(9, UP), mem(9, 5)))),
        f"ded push_all {l11}",
    )
    l14 = s.step(
        Imp(And(sub(P, 5), wv), sub(UP, 5)), f"ded tautmp {l13} {upi}"
    )
    tkk = s.step(Imp(kf, kfp), f"ded tautmp {l14}")
    lift = s.step(Imp(Ex(v(5), kf), Ex(v(5), kfp)), f"ded ex_mono {tkk}")
    s10 = s.step(
        Imp(mem(3, d), Imp(mem(4, d), Ex(v(5), kfp))), f"ded tautmp {s4} {lift}", "S10"
    )

    # S11, S12: as S8/S9 but for the union of the pair
    s7u = s.step(
        Imp(sub(UP, 8), Imp(mem(8, d), mem(UP, d))), f"subst {s7t} x7 {term_text(UP)}"
    )
    s11 = s.step(
        All(v(8), Imp(sub(UP, 8), Imp(mem(8, d), mem(UP, d)))), f"gen x8 {s7u}", "S11"
    )
    a12 = s.step(Imp(sub(UP, 5), Imp(mem(5, d), mem(UP, d))), f"ded inst {s11}")
    b12 = s.step(Imp(kfp, mem(UP, d)), f"ded tautmp {a12}")
    c12 = s.step(All(v(5), Imp(kfp, mem(UP, d))), f"gen x5 {b12}")
    d12 = s.step(Imp(Ex(v(5), kfp), mem(UP, d)), f"ded ex_elim {c12}")
    s12 = s.step(
        Imp(mem(3, d), Imp(mem(4, d), mem(UP, d))), f"ded tautmp {s10} {d12}", "S12"
    )

    # S13..S15: closures
    a13 = s.step(
        Imp(mem(3, d), All(v(4), Imp(mem(4, d), mem(P, d)))), f"ded push_all {s9}"
    )
    s13 = s.step(
        All(v(3), Imp(mem(3, d), All(v(4), Imp(mem(4, d), mem(P, d))))),
        f"gen x3 {a13}", "S13",
    )
    a14 = s.step(
        Imp(mem(3, d), All(v(4), Imp(mem(4, d), mem(UP, d)))), f"ded push_all {s12}"
    )
    s14 = s.step(
        All(v(3), Imp(mem(3, d), All(v(4), Imp(mem(4, d), mem(UP, d))))),
        f"gen x3 {a14}", "S14",
    )
    s15 = s.step(
        All(v(7), All(v(3), Imp(sub(7, 3), Imp(mem(3, d), mem(7, d))))),
        f"ded gens {s7}", "S15",
    )
    s.step(
        And(And(s.formula(s13), s.formula(s14)), s.formula(s15)),
        f"ded tautmp {s13} {s14} {s15}",
    )
    return Entry(
        "nice-e-s", "nice_axioms(e) S1-S15", theory, s.text(), paper_steps=15,
        note="closure consequences of a packaged subset-friendly set",
    )


# ---------------------------------------------------------------------------
# Pipelines

def durchschnitt_pipeline() -> K.Proof:
    """The intersection theorem, by double discharge and generalization."""
    t0 = rst()
    t1 = extend_with_constant(t0, "c")
    c = Const("c")
    exc_f = Ex(v(4), mem(4, c))
    t2 = extend_with_axiom(t1, "exc", exc_f)
    t3 = extend_with_constant(t2, "d")
    d = Const("d")
    t4 = extend_with_axiom(t3, "indc", mem(d, c))

    inner_block = All(v(2), Imp(mem(2, c), mem(3, 2)))
    b = ProofBuilder(t4)
    i1 = b.schema("A2", (v(5), v(9), v(3)), inner_block)
    i2 = b.subst(i1, v(9), d)
    i3 = b.basis("indc")
    i4 = b.axsubst(v(2), Imp(mem(2, c), mem(3, 2)), d)
    i5 = b.tautmp(Iff(And(mem(3, d), inner_block), inner_block), [i3, i4])
    target_x = Ex(v(5), All(v(3), Iff(mem(3, 5), inner_block)))
    i6 = b.tpl_equiv_replace(i5, b.formula(i2), (0, 0, 1))
    i7 = b.tautmp(target_x, [i2, i6])
    inner = b.proof()
    assert check_proof(inner).ok

    ded1 = deduction_transform(inner, "indc", i7)
    r = v(10)
    g1 = generalize_constant(ded1, "d", r)
    b2 = ProofBuilder(g1.theory, list(g1.steps))
    last = len(g1.steps) - 1
    gr = b2.gen(r, last)
    xe = b2.tpl_ex_elim(r, mem(r, c), target_x)
    imp_ex = b2.mp(gr, xe)
    exc_i = b2.basis("exc")
    ri = b2.tpl_rename_iff(exc_f, Ex(r, mem(r, c)))
    exr = b2.tautmp(Ex(r, mem(r, c)), [exc_i, ri])
    goal = b2.mp(exr, imp_ex)
    stage2 = b2.proof()
    assert check_proof(stage2).ok

    ded2 = deduction_transform(stage2, "exc", goal)
    g2 = generalize_constant(ded2, "c", v(11))
    b3 = ProofBuilder(g2.theory, list(g2.steps))
    b3.subst(len(g2.steps) - 1, v(11), v(1))
    final = b3.proof()
    assert check_proof(final).ok
    return final


def entry_durchschnitt() -> Entry:
    proof = durchschnitt_pipeline()
    text = render_proof(proof)
    return Entry(
        "durchschnitt", "durchschnitt", proof.theory, text,
        note="flattened pipeline: two deduction discharges, two constant generalizations",
    )


def sf_folgerungen_pipeline() -> K.Proof:
    """Both packaged subset-friendliness consequences over the extended theory."""
    entry = entry_nice_e_s()
    doc = parse_proof(entry.text, entry.theory)
    assert check_proof(doc.proof).ok

    ded = deduction_transform(doc.proof, "sf-cd")
    xd = v(20)
    g1 = generalize_constant(ded, "d", xd)
    b = ProofBuilder(g1.theory, list(g1.steps))
    i = b.subst(len(g1.steps) - 1, xd, v(1))
    stage = b.proof()
    assert check_proof(stage).ok

    ded2_input = stage
    xc = v(21)
    g2 = generalize_constant(ded2_input, "c", xc)
    b2 = ProofBuilder(g2.theory, list(g2.steps))
    i2 = b2.subst(len(g2.steps) - 1, xc, v(2))
    all_form = b2.gen(v(1), i2)
    ex_form = b2.schema("A5ext", (v(1), v(2), v(3), v(4), v(5), v(6)))
    b2.add(
        Ex(v(1), And(b2.formula(ex_form).body, _g_conj())),
        Derived("stronger_exists", (ex_form, all_form)),
    )
    final = b2.proof()
    v2 = check_proof(final)
    assert v2.ok, v2
    return final


def _g_conj() -> Formula:
    g13 = All(v(3), Imp(mem(3, 1), All(v(4), Imp(mem(4, 1), mem(pr(3, 4), 1)))))
    g14 = All(v(3), Imp(mem(3, 1), All(v(4), Imp(mem(4, 1), mem(un(pr(3, 4)), 1)))))
    g15 = All(v(7), All(v(3), Imp(sub(7, 3), Imp(mem(3, 1), mem(7, 1)))))
    return And(And(g13, g14), g15)


def entry_sf_folgerungen() -> Entry:
    proof = sf_folgerungen_pipeline()
    text = render_proof(proof)
    return Entry(
        "sf-folgerungen", "sf_folgerungen + stronger_exists", proof.theory, text,
        note="flattened pipeline ending in the strengthened existence formula",
    )


# ---------------------------------------------------------------------------

def build_entries() -> list[Entry]:
    entries = template_entries()
    entries += [
        entry_lem1a(),
        entry_lem2(),
        entry_lem3(),
        entry_lem4(),
        entry_const_erw(),
        entry_nice_e1(),
        entry_e3_pre(),
        entry_nice_e3(),
        entry_union_exists(),
        entry_nice_e4(),
        entry_nice_e5(),
        entry_e6_pre(),
        entry_nice_e6(),
        entry_uniq_e1(),
        _uniq_entry("uniq-e3", "conserv2(b) uniqueness for un", "E3"),
        _uniq_entry("uniq-e4", "conserv2(b) uniqueness for sg", "E4"),
        _uniq_entry("uniq-e5", "conserv2(b) uniqueness for pr", "E5"),
        _uniq_entry("uniq-e6", "conserv2(b) uniqueness for pw", "E6"),
        entry_nice_e_s(),
        entry_durchschnitt(),
        entry_sf_folgerungen(),
    ]
    return entries


def write_corpus(root: Path) -> list[str]:
    root.mkdir(parents=True, exist_ok=True)
    names = []
    for e in build_entries():
        d = root / e.name
        d.mkdir(parents=True, exist_ok=True)
        (d / "theory").write_text(render_theory(e.theory))
        (d / "proof").write_text(e.text)
        doc = parse_proof(e.text, e.theory)
        verdict = check_proof(doc.proof)
        if not verdict.ok:
            raise RuntimeError(f"{e.name} fails: {verdict.first_failure}")
        expect = [
            "verdict: ok",
            f"label: {e.label}",
            f"steps: {len(doc.proof.steps)}",
        ]
        if e.paper_steps:
            expect.append(f"paper_steps: {e.paper_steps}")
        expect.append(f"final: {render_formula(doc.proof.steps[-1].formula)}")
        if e.note:
            expect.append(f"note: {e.note}")
        (d / "expect").write_text("\n".join(expect) + "\n")
        names.append(e.name)
    return names


def main(argv=None):
    args = argv if argv is not None else sys.argv[1:]
    out = Path(args[0]) if args else Path("corpus")
    names = write_corpus(out)
    print(f"wrote {len(names)} corpus entries to {out}")


if __name__ == "__main__":
    main()
