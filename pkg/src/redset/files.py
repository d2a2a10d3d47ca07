"""Plain-text theory and proof file formats.

Theory files have sections [schemas], [flags], [extends], [signature] and
[axioms].  The definitional chain in [extends] is applied first, then any
scratch symbols from [signature], then the named basis axioms.  Proof
files hold one step per line, `N. <formula> ; <justification>`, with
1-based premise references and `#` comments; a trailing `# [marker]`
tags a step for reporting.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import Optional

from . import kernel as K
from .schemas import (
    Definition, Theory, extend_by_definition, extend_with_axiom,
    extend_with_constant, extend_with_function,
)
from .syntax import (
    All, Eq, Formula, Imp, Mem, Pred, Signature, SyntaxError_, Term, Var,
    parse_formula, parse_term, render_formula, render_term,
)

_FIXED_SCHEMAS = ("A1", "A2", "A3", "A4", "A5", "A6", "A5ext", "Repl")
_VAR_RE = re.compile(r"^x([0-9]+)$")


class FileFormatError(ValueError):
    pass


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].rstrip()


def _marker(line: str) -> Optional[str]:
    m = re.search(r"#\s*\[([^\]]+)\]\s*$", line)
    return m.group(1) if m else None


def _parse_var(tok: str) -> Var:
    m = _VAR_RE.match(tok)
    if not m or int(m.group(1)) < 1:
        raise FileFormatError(f"expected a variable, got {tok!r}")
    return Var(int(m.group(1)))


# ---------------------------------------------------------------------------
# Theory files

def parse_theory(text: str) -> Theory:
    sections: dict[str, list[str]] = {}
    current: Optional[str] = None
    for raw in text.splitlines():
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip().lower()
            sections.setdefault(current, [])
            continue
        if current is None:
            raise FileFormatError(f"content before any section: {line!r}")
        sections[current].append(line)

    active = set()
    for line in sections.get("schemas", []):
        for tok in line.split():
            if tok not in _FIXED_SCHEMAS:
                raise FileFormatError(f"unknown schema id: {tok}")
            active.add(tok)
    sf = False
    for line in sections.get("flags", []):
        for tok in line.split():
            if tok == "sf":
                sf = True
            else:
                raise FileFormatError(f"unknown flag: {tok}")

    theory = Theory(active_schemas=frozenset(active), sf_flag=sf)

    for line in sections.get("extends", []):
        theory = extend_by_definition(theory, _parse_definition(line, theory))

    for line in sections.get("signature", []):
        toks = line.split()
        match toks:
            case ["constant", name]:
                theory = extend_with_constant(theory, name)
            case ["function", name, arity]:
                theory = extend_with_function(theory, name, int(arity))
            case ["predicate", name, arity]:
                theory = replace(
                    theory,
                    signature=theory.signature.with_predicate(name, int(arity)),
                )
            case _:
                raise FileFormatError(f"bad signature line: {line!r}")

    for line in sections.get("axioms", []):
        if ":" not in line:
            raise FileFormatError(f"bad axiom line (missing name): {line!r}")
        name, body = line.split(":", 1)
        theory = extend_with_axiom(
            theory, name.strip(), parse_formula(body.strip(), theory.signature)
        )
    return theory


def _parse_definition(line: str, theory: Theory) -> Definition:
    fields = [f.strip() for f in line.split(";")]
    head = fields[0].split()
    if len(head) != 3:
        raise FileFormatError(f"bad definition head: {fields[0]!r}")
    kind, symbol, arity = head[0], head[1], int(head[2])
    schema_id = ""
    value_var: Optional[Var] = None
    arg_vars: tuple[Var, ...] = ()
    body: Optional[Formula] = None
    exists_ref = unique_ref = None
    for f in fields[1:]:
        toks = f.split(None, 1)
        if len(toks) == 1:
            schema_id = toks[0]
            continue
        key, rest = toks
        if key == "value":
            value_var = _parse_var(rest.strip())
        elif key == "args":
            arg_vars = tuple(_parse_var(t) for t in rest.split())
        elif key == "body":
            body = parse_formula(rest, theory.signature)
        elif key == "exists":
            exists_ref = rest.strip()
        elif key == "unique":
            unique_ref = rest.strip()
        else:
            raise FileFormatError(f"bad definition field: {f!r}")
    if body is None:
        raise FileFormatError(f"definition of {symbol} lacks a body")
    return Definition(
        kind, symbol, arity, value_var, arg_vars, body,
        schema_id=schema_id, exists_ref=exists_ref, unique_ref=unique_ref,
    )


def render_theory(theory: Theory) -> str:
    lines = []
    fixed = [s for s in _FIXED_SCHEMAS if s in theory.active_schemas]
    if fixed:
        lines += ["[schemas]", " ".join(fixed), ""]
    if theory.sf_flag:
        lines += ["[flags]", "sf", ""]
    if theory.chain:
        lines.append("[extends]")
        for d in theory.chain:
            parts = [f"{d.kind} {d.symbol} {d.arity}", d.schema_id]
            if d.value_var is not None:
                parts.append(f"value x{d.value_var.index}")
            if d.arg_vars:
                parts.append("args " + " ".join(f"x{v.index}" for v in d.arg_vars))
            parts.append("body " + render_formula(d.body))
            if d.exists_ref:
                parts.append(f"exists {d.exists_ref}")
            if d.unique_ref:
                parts.append(f"unique {d.unique_ref}")
            lines.append(" ; ".join(parts))
        lines.append("")
    chain_symbols = {d.symbol for d in theory.chain}
    extra_consts = sorted(theory.signature.constants - chain_symbols)
    extra_funcs = [
        (n, a) for n, a in theory.signature.functions if n not in chain_symbols
    ]
    extra_preds = [
        (n, a) for n, a in theory.signature.predicates if n not in chain_symbols
    ]
    if extra_consts or extra_funcs or extra_preds:
        lines.append("[signature]")
        for n in extra_consts:
            lines.append(f"constant {n}")
        for n, a in extra_funcs:
            lines.append(f"function {n} {a}")
        for n, a in extra_preds:
            lines.append(f"predicate {n} {a}")
        lines.append("")
    if theory.basis:
        lines.append("[axioms]")
        for name, f in theory.basis:
            lines.append(f"{name}: {render_formula(f)}")
        lines.append("")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Proof files

def render_justification(j: K.Justification) -> str:
    match j:
        case K.Taut():
            return "taut"
        case K.AxSubst(x, t):
            return f"axsubst x{x.index} {render_term(t)}"
        case K.AxQDist():
            return "axqdist"
        case K.AxExDef():
            return "axexdef"
        case K.AxEqRefl():
            return "axeqrefl"
        case K.AxEqCongr(p):
            return f"axeqcongr {p}"
        case K.Schema(sid, vs, payload):
            head = f"schema {sid} " + " ".join(f"x{v.index}" for v in vs)
            if payload is not None:
                head += " with " + render_formula(payload)
            return head
        case K.Basis(name):
            return f"basis {name}"
        case K.MP(i, j2):
            return f"mp {i + 1} {j2 + 1}"
        case K.Gen(x, i):
            return f"gen x{x.index} {i + 1}"
        case K.Subst(i, x, t):
            return f"subst {i + 1} x{x.index} {render_term(t)}"
        case K.Rename(i, o, n):
            return f"rename {i + 1} x{o.index} x{n.index}"
        case K.Derived(rule, prem):
            return f"ded {rule}" + "".join(f" {i + 1}" for i in prem)
    raise FileFormatError(f"cannot render justification {j!r}")


def parse_justification(text: str, formula: Formula, sig: Signature) -> K.Justification:
    payload: Optional[Formula] = None
    if " with " in text:
        text, payload_text = text.split(" with ", 1)
        payload = None  # parsed below once the signature is known
        payload_src = payload_text.strip()
    else:
        payload_src = None
    toks = text.split()
    if not toks:
        raise FileFormatError("empty justification")
    kind, args = toks[0], toks[1:]
    match kind:
        case "taut":
            return K.Taut()
        case "axqdist":
            return K.AxQDist()
        case "axexdef":
            return K.AxExDef()
        case "axeqrefl":
            return K.AxEqRefl()
        case "axeqcongr":
            if args:
                return K.AxEqCongr(args[0])
            match formula:
                case Imp(Eq(_, _), Imp(a, _)):
                    name = a.name if isinstance(a, Pred) else (
                        "eq" if isinstance(a, Eq) else "mem"
                    )
                    return K.AxEqCongr(name)
            raise FileFormatError("cannot infer the congruence predicate")
        case "axsubst":
            if args:
                return K.AxSubst(_parse_var(args[0]), parse_term(" ".join(args[1:]), sig))
            match formula:
                case Imp(All(x, g), h):
                    t = K.infer_subst_term(g, x, h)
                    if t is None:
                        raise FileFormatError("cannot infer the substitution term")
                    return K.AxSubst(x, t)
            raise FileFormatError("axsubst step has the wrong shape")
        case "schema":
            if not args:
                raise FileFormatError("schema justification needs an id")
            sid, vars_ = args[0], tuple(_parse_var(a) for a in args[1:])
            if payload_src is not None:
                payload = parse_formula(payload_src, sig)
            return K.Schema(sid, vars_, payload)
        case "basis":
            if len(args) != 1:
                raise FileFormatError("basis justification needs a name")
            return K.Basis(args[0])
        case "mp":
            i, j = (int(a) - 1 for a in args)
            return K.MP(i, j)
        case "gen":
            return K.Gen(_parse_var(args[0]), int(args[1]) - 1)
        case "subst":
            return K.Subst(
                int(args[0]) - 1, _parse_var(args[1]), parse_term(" ".join(args[2:]), sig)
            )
        case "rename":
            return K.Rename(int(args[0]) - 1, _parse_var(args[1]), _parse_var(args[2]))
        case "ded":
            if not args:
                raise FileFormatError("derived justification needs a rule name")
            return K.Derived(args[0], tuple(int(a) - 1 for a in args[1:]))
    raise FileFormatError(f"unknown justification kind: {kind}")


@dataclass(frozen=True)
class ProofDocument:
    proof: K.Proof
    markers: tuple[Optional[str], ...]


def parse_proof(text: str, theory: Theory) -> ProofDocument:
    steps: list[K.Step] = []
    markers: list[Optional[str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        marker = _marker(raw)
        line = _strip_comment(raw).strip()
        if not line:
            continue
        m = re.match(r"^(\d+)\.\s*(.*)$", line)
        if not m:
            raise FileFormatError(f"line {lineno}: steps start with 'N.'")
        num = int(m.group(1))
        if num != len(steps) + 1:
            raise FileFormatError(
                f"line {lineno}: expected step {len(steps) + 1}, got {num}"
            )
        rest = m.group(2)
        if ";" not in rest:
            raise FileFormatError(f"line {lineno}: missing justification")
        ftext, jtext = rest.split(";", 1)
        try:
            f = parse_formula(ftext.strip(), theory.signature)
            j = parse_justification(jtext.strip(), f, theory.signature)
        except (SyntaxError_, FileFormatError, ValueError) as e:
            raise FileFormatError(f"line {lineno}: {e}") from e
        steps.append(K.Step(f, j))
        markers.append(marker)
    return ProofDocument(K.Proof(theory, tuple(steps)), tuple(markers))


def render_proof(proof: K.Proof, markers: Optional[tuple[Optional[str], ...]] = None) -> str:
    lines = []
    for i, step in enumerate(proof.steps):
        line = f"{i + 1}. {render_formula(step.formula)} ; {render_justification(step.just)}"
        if markers and markers[i]:
            line += f"  # [{markers[i]}]"
        lines.append(line)
    return "\n".join(lines) + "\n"
