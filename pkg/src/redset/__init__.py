"""redset: proof checking, symbol elimination and finite model checking
for a reduced axiomatic set theory.

The base theory has six axiom schemas over pure sets: extensionality,
subsets, regularity, pairing, subset-friendly sets and choice.  The
extended theory adds the defined symbols O, sub, un, sg, pr and pw
conservatively; the elaborator maps extended formulas back to the base
language, and the model layer cross-checks everything semantically in
finite cumulative-hierarchy universes of hereditarily finite sets.
"""

from . import corpus, elaborator, files, hfset, kernel, model, schemas, syntax

__all__ = [
    "corpus", "elaborator", "files", "hfset", "kernel", "model",
    "schemas", "syntax",
]
