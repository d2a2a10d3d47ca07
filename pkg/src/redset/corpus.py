"""Loading and running the derivation corpus.

Each entry is a directory `corpus/<name>/` holding `theory`, `proof` and
`expect`.  run_corpus checks every selected proof with the kernel and
compares against the expectations; any unexpected verdict marks the run
as failed.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .files import FileFormatError, ProofDocument, parse_proof, parse_theory
from .kernel import Proof, Verdict, check_proof
from .schemas import Theory


class CorpusError(ValueError):
    pass


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    path: Path
    theory: Theory
    document: ProofDocument
    expect: dict[str, str]

    @property
    def proof(self) -> Proof:
        return self.document.proof

    @property
    def label(self) -> str:
        return self.expect.get("label", self.name)

    @property
    def paper_steps(self) -> Optional[int]:
        raw = self.expect.get("paper_steps")
        return int(raw) if raw is not None else None


@dataclass(frozen=True)
class EntryResult:
    name: str
    ok: bool
    steps: int
    detail: str = ""


@dataclass(frozen=True)
class CorpusSummary:
    results: tuple[EntryResult, ...]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)


def find_corpus_root(start: Optional[Path] = None) -> Path:
    """Locate the corpus directory next to the package or above the cwd."""
    candidates = []
    if start is not None:
        candidates.append(Path(start))
    here = Path(__file__).resolve()
    for base in [Path.cwd(), *Path.cwd().parents, *here.parents]:
        candidates.append(base / "corpus")
    for c in candidates:
        if c.is_dir() and any(c.iterdir()):
            return c
    raise CorpusError("no corpus directory found; run `python -m redset.corpus_build`")


def _parse_expect(text: str) -> dict[str, str]:
    out = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise CorpusError(f"bad expect line: {line!r}")
        key, value = line.split(":", 1)
        out[key.strip()] = value.strip()
    return out


def load_entry(path: Path) -> CorpusEntry:
    try:
        theory = parse_theory((path / "theory").read_text())
        doc = parse_proof((path / "proof").read_text(), theory)
        expect = _parse_expect((path / "expect").read_text())
    except (OSError, FileFormatError) as e:
        raise CorpusError(f"cannot load corpus entry {path.name}: {e}") from e
    return CorpusEntry(path.name, path, theory, doc, expect)


def discover(root: Optional[Path] = None) -> list[CorpusEntry]:
    root = find_corpus_root(root)
    entries = []
    for d in sorted(root.iterdir()):
        if d.is_dir() and (d / "proof").exists():
            entries.append(load_entry(d))
    if not entries:
        raise CorpusError(f"no corpus entries under {root}")
    return entries


def check_entry(entry: CorpusEntry) -> EntryResult:
    verdict = check_proof(entry.proof)
    expected_ok = entry.expect.get("verdict", "ok") == "ok"
    steps = len(entry.proof.steps)
    if verdict.ok != expected_ok:
        detail = "unexpected success" if verdict.ok else (
            f"step {verdict.first_failure[0] + 1}: {verdict.first_failure[1]}"
        )
        return EntryResult(entry.name, False, steps, detail)
    marked = sum(1 for m in entry.document.markers if m)
    want = entry.paper_steps
    if want is not None and marked != want:
        return EntryResult(
            entry.name, False, steps, f"expected {want} marked steps, found {marked}"
        )
    want_final = entry.expect.get("final")
    if want_final is not None:
        from .syntax import render_formula

        got = render_formula(entry.proof.steps[-1].formula)
        if got != want_final:
            return EntryResult(entry.name, False, steps, "final formula differs")
    return EntryResult(entry.name, True, steps)


def run_corpus(filter_: Optional[str] = None, root: Optional[Path] = None) -> CorpusSummary:
    entries = discover(root)
    if filter_:
        entries = [e for e in entries if filter_ in e.name]
        if not entries:
            raise CorpusError(f"no corpus entries match {filter_!r}")
    return CorpusSummary(tuple(check_entry(e) for e in entries))
