"""Canonical hereditarily finite sets.

Every HFSet is interned: structurally equal values are the same Python
object, so extensionality is identity and membership tests are O(1) id
lookups.  Elements are created strictly before their parents, which rules
out membership cycles by construction.

Operations follow the usual definitions: unions, intersections, power
sets, iterated power/union, transitive closure TC, the successor maps
S_plus / S_minus, Kuratowski pairs, ordinal tests and the finite stages
of the cumulative hierarchy.
"""

from __future__ import annotations

import threading
from typing import Iterable, Iterator, Sequence

DEFAULT_CARD_CAP = 1 << 17
STAGE_CAP = 5


class HFCapError(ValueError):
    """A requested construction would exceed the configured cardinality cap."""


class HFSet:
    """An immutable, interned hereditarily finite set."""

    __slots__ = ("elements", "_ids", "id", "rank")

    elements: tuple["HFSet", ...]
    id: int
    rank: int

    def __new__(cls, *args, **kwargs):
        raise TypeError("use make_set / empty, HFSet is interned")

    # no __eq__ / __hash__ overrides: interning makes identity canonical

    def __contains__(self, other: "HFSet") -> bool:
        return other.id in self._ids

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator["HFSet"]:
        return iter(self.elements)

    def __repr__(self) -> str:
        return render_hf(self)


_intern_lock = threading.Lock()
_intern: dict[tuple[int, ...], HFSet] = {}
_next_id = 0


def _mk(elements: Sequence[HFSet]) -> HFSet:
    by_id = {e.id: e for e in elements}
    key = tuple(sorted(by_id))
    with _intern_lock:
        hit = _intern.get(key)
        if hit is not None:
            return hit
        global _next_id
        obj = object.__new__(HFSet)
        obj.elements = tuple(by_id[i] for i in key)
        obj._ids = frozenset(key)
        obj.id = _next_id
        obj.rank = (max(e.rank for e in obj.elements) + 1) if key else 0
        _next_id += 1
        _intern[key] = obj
        return obj


def empty() -> HFSet:
    return _mk(())


def make_set(elements: Iterable[HFSet]) -> HFSet:
    return _mk(tuple(elements))


def member(a: HFSet, b: HFSet) -> bool:
    return a.id in b._ids


def subset(a: HFSet, b: HFSet) -> bool:
    return a._ids <= b._ids


# ---------------------------------------------------------------------------
# Unions and intersections

def union_of(a: HFSet) -> HFSet:
    """The union of all members of a."""
    return make_set(c for b in a for c in b)


def binary_union(a: HFSet, b: HFSet) -> HFSet:
    return make_set(a.elements + b.elements)


def binary_intersection(a: HFSet, b: HFSet) -> HFSet:
    return make_set(e for e in a if e.id in b._ids)


def difference(a: HFSet, b: HFSet) -> HFSet:
    return make_set(e for e in a if e.id not in b._ids)


def intersection_of(a: HFSet) -> HFSet:
    """The intersection of the members of a; defined only for a != {}."""
    if len(a) == 0:
        raise ValueError("intersection of the empty collection is undefined")
    ids = set(a.elements[0]._ids)
    for b in a.elements[1:]:
        ids &= b._ids
    return make_set(e for e in a.elements[0] if e.id in ids)


# ---------------------------------------------------------------------------
# Power sets

def power_set(a: HFSet, cap: int = DEFAULT_CARD_CAP) -> HFSet:
    n = len(a)
    if n >= cap.bit_length() and (1 << n) > cap:
        raise HFCapError(f"power set would have 2^{n} elements, cap is {cap}")
    subsets = []
    els = a.elements
    for mask in range(1 << n):
        subsets.append(make_set(els[i] for i in range(n) if mask >> i & 1))
    return make_set(subsets)


def iterated_power(a: HFSet, n: int, cap: int = DEFAULT_CARD_CAP) -> HFSet:
    if n < 0:
        raise ValueError("iteration count must be >= 0")
    cur = a
    for _ in range(n):
        cur = power_set(cur, cap)
    return cur


def iterated_union(a: HFSet, n: int) -> HFSet:
    if n < 0:
        raise ValueError("iteration count must be >= 0")
    cur = a
    for _ in range(n):
        cur = union_of(cur)
    return cur


# ---------------------------------------------------------------------------
# Transitive closure and successor maps

def tc(a: HFSet) -> HFSet:
    """Transitive closure: the smallest transitive set including a."""
    seen: dict[int, HFSet] = {}
    stack = list(a.elements)
    while stack:
        e = stack.pop()
        if e.id not in seen:
            seen[e.id] = e
            stack.extend(e.elements)
    return make_set(seen.values())


def is_transitive(a: HFSet) -> bool:
    return all(e._ids <= a._ids for e in a)


def successor(a: HFSet) -> HFSet:
    """A+ = {A} union A."""
    return make_set(a.elements + (a,))


def s_plus(a: HFSet) -> HFSet:
    """S_plus[A] = TC[{A}] = {A} union TC[A], always transitive."""
    return tc(sigma(a))


def s_minus(t: HFSet) -> HFSet:
    """S_minus[T] = union of T minus union[T]; inverts s_plus."""
    return union_of(difference(t, union_of(t)))


# ---------------------------------------------------------------------------
# Pairs, tuples and products

def sigma(a: HFSet) -> HFSet:
    return make_set((a,))


def sigma2(a: HFSet, b: HFSet) -> HFSet:
    return make_set((a, b))


def finite_set(elements: Iterable[HFSet]) -> HFSet:
    return make_set(elements)


def ordered_pair(a: HFSet, b: HFSet) -> HFSet:
    """Kuratowski pair {{A},{A,B}}."""
    return make_set((sigma(a), sigma2(a, b)))


def tuple_of(items: Sequence[HFSet]) -> HFSet:
    if len(items) < 2:
        raise ValueError("tuples need at least two components")
    out = ordered_pair(items[0], items[1])
    for x in items[2:]:
        out = ordered_pair(out, x)
    return out


def cartesian_product(a: HFSet, b: HFSet) -> HFSet:
    return make_set(ordered_pair(x, y) for x in a for y in b)


# ---------------------------------------------------------------------------
# Ordinals and subset-friendliness

def is_ordinal(a: HFSet) -> bool:
    """Transitive with all members transitive."""
    return is_transitive(a) and all(is_transitive(e) for e in a)


def ordinals_in(t: HFSet) -> HFSet:
    """The set of ordinal members of a transitive set t."""
    if not is_transitive(t):
        raise ValueError("ordinals_in requires a transitive set")
    return make_set(e for e in t if is_ordinal(e))


def sf_conditions(u: HFSet, cap: int = DEFAULT_CARD_CAP) -> tuple[bool, bool, bool, bool]:
    """The four subset-friendliness conditions, evaluated literally.

    1. {} is a member; 2. u is transitive; 3. u is closed under power
    sets of members; 4. any two members sit inside some transitive member.
    """
    c1 = member(empty(), u)
    c2 = is_transitive(u)

    def pow_in(y: HFSet) -> bool:
        # a power set too large to materialize cannot equal any member
        try:
            return member(power_set(y, cap), u)
        except HFCapError:
            return False

    c3 = all(pow_in(y) for y in u)
    transitive_members = [v for v in u if is_transitive(v)]
    c4 = all(
        any(member(y, v) and member(z, v) for v in transitive_members)
        for y in u
        for z in u
    )
    return (c1, c2, c3, c4)


# ---------------------------------------------------------------------------
# Cumulative hierarchy stages

def von_neumann_stage(k: int, cap: int = STAGE_CAP) -> HFSet:
    """The k-th finite stage: k-fold power set of the empty set."""
    if k < 0:
        raise ValueError("stage index must be >= 0")
    if k > cap:
        raise HFCapError(f"stage {k} exceeds the stage cap {cap}")
    return iterated_power(empty(), k)


def sp_stage(a: HFSet, n: int, cap: int = DEFAULT_CARD_CAP) -> HFSet:
    """n-th power-set stage over the transitive closure of a."""
    return iterated_power(tc(a), n, cap)


# ---------------------------------------------------------------------------
# Braces literals

def parse_hf(text: str) -> HFSet:
    """Parse a braces literal like `{{} {{}}}` (whitespace separated)."""
    pos = 0

    def skip_ws():
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def parse() -> HFSet:
        nonlocal pos
        skip_ws()
        if pos >= len(text) or text[pos] != "{":
            raise ValueError(f"expected '{{' at position {pos}")
        pos += 1
        elems = []
        while True:
            skip_ws()
            if pos >= len(text):
                raise ValueError("unbalanced braces")
            if text[pos] == "}":
                pos += 1
                return make_set(elems)
            elems.append(parse())

    out = parse()
    skip_ws()
    if pos != len(text):
        raise ValueError(f"trailing input: {text[pos:]!r}")
    return out


_render_cache: dict[int, str] = {}


def render_hf(a: HFSet) -> str:
    """Canonical braces literal; elements ordered by (rank, text)."""
    hit = _render_cache.get(a.id)
    if hit is not None:
        return hit
    parts = sorted((render_hf(e) for e in a), key=lambda s: (len(s), s))
    out = "{" + " ".join(parts) + "}"
    _render_cache[a.id] = out
    return out
