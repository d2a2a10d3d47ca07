"""Batch command-line front end.

Subcommands: check (verify a proof file against a theory), elaborate
(eliminate defined symbols from a formula), model (validity reports over
finite stages), hf (hereditarily-finite-set calculator) and corpus (run
the derivation corpus).  All reports are line-oriented key=value records.

Exit status: 0 success, 1 verification or validity failure, 2 input error.
"""

from __future__ import annotations

import argparse
import re
import sys
from pathlib import Path

from . import hfset as hf
from .corpus import CorpusError, run_corpus
from .elaborator import ElaborationError, elaborate_to_base
from .files import FileFormatError, parse_proof, parse_theory
from .kernel import check_proof
from .model import (
    BudgetError, axiom_report, check_valid, stage_universe,
)
from .schemas import SchemaError, TheoryError
from .syntax import SyntaxError_, parse_formula, render_formula


class InputError(ValueError):
    pass


def _load_theory(path: str):
    try:
        return parse_theory(Path(path).read_text())
    except OSError as e:
        raise InputError(f"cannot read theory file: {e}")
    except (FileFormatError, SyntaxError_, TheoryError, SchemaError) as e:
        raise InputError(f"bad theory file: {e}")


def cmd_check(args) -> int:
    theory = _load_theory(args.theory)
    try:
        doc = parse_proof(Path(args.proof).read_text(), theory)
    except OSError as e:
        raise InputError(f"cannot read proof file: {e}")
    except FileFormatError as e:
        raise InputError(f"bad proof file: {e}")
    verdict = check_proof(doc.proof)
    print(f"steps={len(doc.proof.steps)}")
    if verdict.ok:
        print("ok=true")
        return 0
    idx, reason = verdict.first_failure
    print("ok=false")
    print(f"first_failure_step={idx + 1}")
    print(f"first_failure_reason={reason}")
    return 1


def cmd_elaborate(args) -> int:
    theory = _load_theory(args.theory)
    try:
        f = parse_formula(args.formula, theory.signature)
        out = elaborate_to_base(theory, f)
    except (SyntaxError_, ElaborationError) as e:
        raise InputError(str(e))
    print(render_formula(out))
    return 0


def cmd_model(args) -> int:
    try:
        universe = stage_universe(args.stage)
    except (ValueError, hf.HFCapError) as e:
        raise InputError(str(e))
    print(f"stage={args.stage}")
    print(f"individuals={universe.size}")
    status = 0
    if args.formula:
        theory = _load_theory(args.theory) if args.theory else None
        sig = theory.signature if theory else None
        try:
            f = parse_formula(args.formula, sig) if sig else parse_formula(args.formula)
            res = check_valid(universe, f, budget=args.budget)
        except (SyntaxError_, BudgetError) as e:
            raise InputError(str(e))
        print(f"valid={'true' if res.valid else 'false'}")
        print(f"checked={res.checked}")
        if res.counterexample:
            print(f"counterexample={res.witness_text()}")
        if res.undefined:
            print(f"undefined={res.undefined}")
        status = 0 if res.valid else 1
    if args.axioms:
        from .schemas import rst, zfc_prime

        theory = zfc_prime() if args.replacement else rst()
        ids = ["A1", "A2", "A3", "A4", "A5", "A6"]
        if args.replacement:
            ids.append("Repl")
        try:
            rows = axiom_report(
                universe, theory, ids,
                payload_count=args.payloads, seed=args.seed, budget=args.budget,
            )
        except BudgetError as e:
            raise InputError(str(e))
        for row in rows:
            line = (
                f"schema={row.schema_id}"
                f" valid={'true' if row.valid else 'false'}"
                f" predicted={'true' if row.predicted else 'false'}"
                f" match={'true' if row.matches_prediction else 'false'}"
            )
            if row.detail:
                line += f" detail={row.detail}"
            print(line)
        if not all(r.matches_prediction for r in rows):
            status = 1
    return status


_HF_UNARY = {
    "tc": hf.tc,
    "splus": hf.s_plus,
    "sminus": hf.s_minus,
    "pow": hf.power_set,
    "union": hf.union_of,
    "intersection": hf.intersection_of,
    "ordinals-in": hf.ordinals_in,
    "succ": hf.successor,
}
_HF_BINARY = {
    "member": hf.member,
    "subset": hf.subset,
    "pair": hf.sigma2,
    "opair": hf.ordered_pair,
    "cross": hf.cartesian_product,
}
_HF_PRED = {
    "transitive": hf.is_transitive,
    "ordinal": hf.is_ordinal,
}


def _hf_eval(tokens: list[str], pos: int):
    if pos >= len(tokens):
        raise InputError("unexpected end of expression")
    tok = tokens[pos]
    if tok == "{":
        elems = []
        pos += 1
        while tokens[pos] != "}":
            e, pos = _hf_eval(tokens, pos)
            if isinstance(e, bool):
                raise InputError("boolean inside a set literal")
            elems.append(e)
        return hf.make_set(elems), pos + 1
    if tok == "(":
        e, pos = _hf_eval(tokens, pos + 1)
        if tokens[pos] != ")":
            raise InputError("expected ')'")
        return e, pos + 1
    m = re.fullmatch(r"stage\((\d+)\)", tok)
    if m:
        try:
            return hf.von_neumann_stage(int(m.group(1))), pos + 1
        except hf.HFCapError as e:
            raise InputError(str(e))
    if tok in _HF_UNARY:
        a, pos = _hf_eval(tokens, pos + 1)
        try:
            return _HF_UNARY[tok](a), pos
        except (ValueError, hf.HFCapError) as e:
            raise InputError(str(e))
    if tok in _HF_BINARY:
        a, pos = _hf_eval(tokens, pos + 1)
        b, pos = _hf_eval(tokens, pos)
        return _HF_BINARY[tok](a, b), pos
    if tok in _HF_PRED:
        a, pos = _hf_eval(tokens, pos + 1)
        return _HF_PRED[tok](a), pos
    raise InputError(f"unknown operator: {tok}")


def cmd_hf(args) -> int:
    text = args.expression
    tokens = re.findall(r"[{}()]|[A-Za-z0-9_\-]+(?:\(\d+\))?", text)
    value, pos = _hf_eval(tokens, 0)
    if pos != len(tokens):
        raise InputError(f"trailing tokens: {' '.join(tokens[pos:])}")
    if isinstance(value, bool):
        print("true" if value else "false")
    else:
        print(hf.render_hf(value))
    return 0


def cmd_corpus(args) -> int:
    try:
        summary = run_corpus(args.filter, Path(args.dir) if args.dir else None)
    except CorpusError as e:
        raise InputError(str(e))
    for r in summary.results:
        line = f"entry={r.name} ok={'true' if r.ok else 'false'} steps={r.steps}"
        if r.detail:
            line += f" detail={r.detail}"
        print(line)
    print(f"total={len(summary.results)}")
    print(f"ok={'true' if summary.ok else 'false'}")
    return 0 if summary.ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="redset", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="verify a proof file")
    c.add_argument("theory")
    c.add_argument("proof")
    c.set_defaults(fn=cmd_check)

    e = sub.add_parser("elaborate", help="eliminate defined symbols from a formula")
    e.add_argument("theory")
    e.add_argument("formula")
    e.set_defaults(fn=cmd_elaborate)

    m = sub.add_parser("model", help="finite-stage validity reports")
    m.add_argument("stage", type=int)
    m.add_argument("--axioms", action="store_true", help="report the schema table")
    m.add_argument("--replacement", action="store_true", help="include the replacement schema")
    m.add_argument("--formula", help="check one base-language formula")
    m.add_argument("--theory", help="theory file supplying the formula's signature")
    m.add_argument("--payloads", type=int, default=30)
    m.add_argument("--seed", type=int, default=7)
    m.add_argument("--budget", type=int, default=10_000_000)
    m.set_defaults(fn=cmd_model)

    h = sub.add_parser("hf", help="hereditarily-finite-set calculator")
    h.add_argument("expression")
    h.set_defaults(fn=cmd_hf)

    k = sub.add_parser("corpus", help="run the derivation corpus")
    k.add_argument("--filter", help="substring filter on entry names")
    k.add_argument("--dir", help="corpus directory")
    k.set_defaults(fn=cmd_corpus)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except InputError as e:
        print(f"error={e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
