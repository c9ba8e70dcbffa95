"""Relational signatures and finite structures.

A structure of size ``n`` has universe ``0..n-1``.  Relations are stored as
frozensets of tuples.  Constructions attach a side table ``names`` mapping
readable element names (``"l1"``, ``"cP"``, ``"a*"`` ...) to indices; it
never takes part in equality.
"""

from __future__ import annotations

import itertools
import json
import os
import re
from collections.abc import Mapping
from dataclasses import dataclass, field
from functools import cached_property

__all__ = [
    "Signature", "FiniteStructure", "SignatureError", "CapExceeded",
    "DEFAULT_CAP", "slot_cap", "slot_count", "enumerate_structures",
    "isomorphism", "is_isomorphism", "from_partitions", "partition_of",
    "load_structure", "dump_structure",
]

DEFAULT_CAP = 24

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")


class SignatureError(ValueError):
    """A formula or structure does not fit the signature it is used with."""


class CapExceeded(RuntimeError):
    """An exhaustive search would exceed the configured slot cap."""


def slot_cap(cap=None):
    """Effective enumeration cap: explicit value, ``FOINTERP_CAP`` or 24."""
    if cap is not None:
        return int(cap)
    return int(os.environ.get("FOINTERP_CAP", DEFAULT_CAP))


class Signature(Mapping):
    """Relation symbols with arities; no function or constant symbols."""

    __slots__ = ("_rels", "_hash")

    def __init__(self, relations=None, **kw):
        rels = dict(relations or {}, **kw)
        for name, arity in rels.items():
            if not isinstance(name, str) or not (_NAME.match(name) or name in ("<", "~")):
                raise SignatureError(f"bad relation symbol {name!r}")
            if not isinstance(arity, int) or isinstance(arity, bool) or arity < 1:
                raise SignatureError(f"relation {name!r} needs a positive arity, got {arity!r}")
        self._rels = dict(sorted(rels.items()))
        self._hash = hash(tuple(self._rels.items()))

    def __getitem__(self, name):
        return self._rels[name]

    def __iter__(self):
        return iter(self._rels)

    def __len__(self):
        return len(self._rels)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if isinstance(other, Signature):
            return self._rels == other._rels
        return NotImplemented

    def __repr__(self):
        return f"Signature({self._rels!r})"

    def to_json(self):
        return dict(self._rels)


@dataclass(frozen=True, eq=False)
class FiniteStructure:
    signature: Signature
    size: int
    relations: Mapping
    names: Mapping = field(default_factory=dict)

    def __post_init__(self):
        sig = self.signature
        if not isinstance(sig, Signature):
            sig = Signature(sig)
            object.__setattr__(self, "signature", sig)
        n = self.size
        if not isinstance(n, int) or n < 1:
            raise ValueError(f"structure size must be a positive integer, got {n!r}")
        rels = {}
        for name, tuples in self.relations.items():
            if name not in sig:
                raise SignatureError(f"relation {name!r} is not in the signature")
            arity = sig[name]
            ts = frozenset(tuple(t) for t in tuples)
            for t in ts:
                if len(t) != arity:
                    raise SignatureError(f"tuple {t} has wrong arity for {name}/{arity}")
                if any(not isinstance(a, int) or not 0 <= a < n for a in t):
                    raise ValueError(f"tuple {t} of {name} leaves the universe 0..{n - 1}")
            rels[name] = ts
        for name in sig:
            rels.setdefault(name, frozenset())
        object.__setattr__(self, "relations", dict(sorted(rels.items())))
        names = dict(self.names)
        for k, v in names.items():
            if not 0 <= v < n:
                raise ValueError(f"name {k!r} points outside the universe")
        object.__setattr__(self, "names", names)

    def __eq__(self, other):
        if not isinstance(other, FiniteStructure):
            return NotImplemented
        return (self.signature == other.signature and self.size == other.size
                and self.relations == other.relations)

    def __hash__(self):
        return hash((self.signature, self.size,
                     tuple((k, v) for k, v in self.relations.items())))

    def __repr__(self):
        rels = ", ".join(f"{k}:{len(v)}" for k, v in self.relations.items())
        return f"<FiniteStructure size={self.size} {rels}>"

    @property
    def universe(self):
        return range(self.size)

    def __getitem__(self, name):
        """Element index of a named element."""
        return self.names[name]

    def holds(self, rel, *args):
        return tuple(args) in self.relations[rel]

    @cached_property
    def _incidence(self):
        # relation -> element -> tuples containing it
        out = {}
        for rel, ts in self.relations.items():
            idx = {}
            for t in ts:
                for x in set(t):
                    idx.setdefault(x, []).append(t)
            out[rel] = idx
        return out

    @cached_property
    def label(self):
        """Inverse of ``names`` (index -> name) for printing."""
        return {v: k for k, v in self.names.items()}

    def with_names(self, names):
        return FiniteStructure(self.signature, self.size, self.relations, names)

    # JSON ------------------------------------------------------------
    def to_json(self):
        out = {
            "signature": self.signature.to_json(),
            "size": self.size,
            "relations": {k: sorted(list(t) for t in v) for k, v in self.relations.items()},
        }
        if self.names:
            out["names"] = dict(self.names)
        return out

    @classmethod
    def from_json(cls, data):
        try:
            return cls(Signature(data["signature"]), data["size"],
                       data.get("relations", {}), data.get("names", {}))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed structure JSON: {exc}") from exc


def load_structure(path):
    with open(path) as fh:
        return FiniteStructure.from_json(json.load(fh))


def dump_structure(structure, path):
    with open(path, "w") as fh:
        json.dump(structure.to_json(), fh, indent=1)
        fh.write("\n")


def from_partitions(signature, size, partitions, names=None):
    """Build a structure whose listed relations are the equivalences
    generated by the given partitions (lists of classes)."""
    rels = {}
    for rel, classes in partitions.items():
        seen = set()
        tuples = set()
        for cls in classes:
            for a in cls:
                if a in seen:
                    raise ValueError(f"element {a} occurs twice in the {rel} partition")
                seen.add(a)
            tuples.update(itertools.product(cls, repeat=2))
        if seen != set(range(size)):
            raise ValueError(f"{rel} partition does not cover 0..{size - 1}")
        rels[rel] = tuples
    return FiniteStructure(signature, size, rels, names or {})


def partition_of(structure, rel):
    """Classes of an equivalence relation, each sorted, ordered by least element."""
    tuples = structure.relations[rel]
    seen, out = set(), []
    for a in structure.universe:
        if a in seen:
            continue
        cls = sorted(b for b in structure.universe if (a, b) in tuples)
        seen.update(cls)
        out.append(cls)
    return out


# ---------------------------------------------------------------- enumeration

def slot_count(signature, n):
    return sum(n ** a for a in signature.values())


def enumerate_structures(signature, n, cap=None):
    """Every labeled structure of size ``n`` over ``signature``, once each.

    Order: relations by name, tuples lexicographically, truth tables as
    binary counters from all-false upward."""
    signature = signature if isinstance(signature, Signature) else Signature(signature)
    slots = slot_count(signature, n)
    limit = slot_cap(cap)
    if slots > limit:
        raise CapExceeded(f"{slots} tuple slots over size {n} exceed the cap of {limit}")
    table = [(rel, t) for rel, ar in signature.items()
             for t in itertools.product(range(n), repeat=ar)]
    for mask in range(1 << slots):
        rels = {rel: [] for rel in signature}
        for i, (rel, t) in enumerate(table):
            if mask >> i & 1:
                rels[rel].append(t)
        yield FiniteStructure(signature, n, rels)


# ---------------------------------------------------------------- isomorphism

def _colors(s):
    """Isomorphism-invariant element colors: per-relation position counts,
    refined by the multiset of neighbour colors until stable."""
    n = s.size
    base = []
    for a in range(n):
        sig = []
        for rel, ts in s.relations.items():
            ar = s.signature[rel]
            counts = [0] * ar
            diag = 0
            for t in ts:
                for i, x in enumerate(t):
                    if x == a:
                        counts[i] += 1
                if all(x == a for x in t):
                    diag = 1
            sig.append((rel, tuple(counts), diag))
        base.append(tuple(sig))
    return base


def _joint_colors(s1, s2):
    c1, c2 = _colors(s1), _colors(s2)
    for _ in range(max(s1.size, 1)):
        n1 = _step(s1, c1)
        n2 = _step(s2, c2)
        stable = len(set(n1)) == len(set(c1)) and len(set(n2)) == len(set(c2))
        # canonical relabelling shared by both sides
        palette = {c: i for i, c in enumerate(sorted(set(n1) | set(n2), key=repr))}
        c1 = [palette[c] for c in n1]
        c2 = [palette[c] for c in n2]
        if stable:
            break
    return c1, c2


def _step(s, colors):
    new = []
    for a in range(s.size):
        nb = []
        for rel, ts in s.relations.items():
            for t in s._incidence[rel].get(a, ()):
                nb.append((rel, tuple(i for i, x in enumerate(t) if x == a),
                           tuple(colors[x] for x in t)))
        new.append((colors[a], tuple(sorted(nb))))
    return new


def is_isomorphism(s1, s2, f):
    """True iff ``f`` (a list) maps ``s1`` bijectively onto ``s2`` preserving
    every relation in both directions."""
    if s1.signature != s2.signature or s1.size != s2.size or len(f) != s1.size:
        return False
    if sorted(f) != list(range(s2.size)):
        return False
    for rel, ts in s1.relations.items():
        image = {tuple(f[x] for x in t) for t in ts}
        if image != s2.relations[rel]:
            return False
    return True


def isomorphism(s1, s2):
    """A relation-preserving bijection ``s1 -> s2`` as a list, or ``None``.

    Backtracking over candidate images with color-refinement pruning."""
    if s1.signature != s2.signature:
        raise SignatureError("isomorphism needs structures over the same signature")
    if s1.size != s2.size:
        return None
    if any(len(s1.relations[r]) != len(s2.relations[r]) for r in s1.relations):
        return None
    c1, c2 = _joint_colors(s1, s2)
    if sorted(c1) != sorted(c2):
        return None
    by_color = {}
    for b in range(s2.size):
        by_color.setdefault(c2[b], []).append(b)
    # rarest colors first, then connectivity to already placed elements
    order = sorted(range(s1.size), key=lambda a: (len(by_color[c1[a]]), c1[a], a))
    order = _connected_order(s1, order)
    inc1, inc2 = s1._incidence, s2._incidence
    f, finv = [None] * s1.size, [None] * s2.size

    def consistent(a, b):
        # tuples of s1 at a whose elements are all mapped must land in s2
        for rel, idx in inc1.items():
            target = s2.relations[rel]
            for t in idx.get(a, ()):
                img = []
                for x in t:
                    y = b if x == a else f[x]
                    if y is None:
                        break
                    img.append(y)
                else:
                    if tuple(img) not in target:
                        return False
            source = s1.relations[rel]
            for t in inc2[rel].get(b, ()):
                pre = []
                for y in t:
                    x = a if y == b else finv[y]
                    if x is None:
                        break
                    pre.append(x)
                else:
                    if tuple(pre) not in source:
                        return False
        return True

    def place(i):
        if i == len(order):
            return True
        a = order[i]
        for b in by_color[c1[a]]:
            if finv[b] is None and consistent(a, b):
                f[a], finv[b] = b, a
                if place(i + 1):
                    return True
                f[a], finv[b] = None, None
        return False

    if place(0):
        return list(f)
    return None


def _connected_order(s, order):
    inc = s._incidence
    placed, out = set(), []
    rank = {a: i for i, a in enumerate(order)}
    remaining = set(order)
    while remaining:
        frontier = set()
        for a in placed:
            for rel, idx in inc.items():
                for t in idx.get(a, ()):
                    frontier.update(x for x in t if x in remaining)
        pick = min(frontier or remaining, key=rank.__getitem__)
        out.append(pick)
        placed.add(pick)
        remaining.discard(pick)
    return out
