"""The classes of finite structures used by the interpretations.

Simple graphs, bipartite graphs (optionally with at least three vertices
per side), models of two equivalences, and models of a strict linear order
``<`` together with an equivalence ``~``.
"""

from __future__ import annotations

import enum
import itertools
import math
import random

from .semantics import evaluate
from .structures import (CapExceeded, FiniteStructure, Signature, SignatureError,
                         enumerate_structures, from_partitions, slot_cap)
from .syntax import parse, relations_used

__all__ = ["ClassId", "signature_of", "axiom", "validate", "gen_random",
           "members", "set_partitions"]


class ClassId(str, enum.Enum):
    SIMPLE_GRAPH = "graph"
    BIPARTITE_GRAPH = "bigraph"
    BIPARTITE_GRAPH3 = "bigraph3"
    TWO_EQ = "2eq"
    LEQ = "leq"
    ALL = "all"


_SIGNATURES = {
    ClassId.SIMPLE_GRAPH: Signature(E=2),
    ClassId.BIPARTITE_GRAPH: Signature(L=1, R=1, E=2),
    ClassId.BIPARTITE_GRAPH3: Signature(L=1, R=1, E=2),
    ClassId.TWO_EQ: Signature(P=2, Q=2),
    ClassId.LEQ: Signature({"<": 2, "~": 2}),
}


def signature_of(c):
    c = ClassId(c)
    if c is ClassId.ALL:
        raise ValueError("the class of all structures has no fixed signature")
    return _SIGNATURES[c]


def _equivalence(r):
    return (f"(forall x. {r}(x,x)) & (forall x y. ({r}(x,y) -> {r}(y,x))) & "
            f"(forall x y z. ({r}(x,y) & {r}(y,z) -> {r}(x,z)))")


def _at_least_three(r):
    return (f"(exists u1 u2 u3. {r}(u1) & {r}(u2) & {r}(u3) & "
            f"!(u1 = u2) & !(u1 = u3) & !(u2 = u3))")


_BIPARTITE = "(forall x. (L(x) <-> !R(x))) & (forall x y. (E(x,y) -> L(x) & R(y)))"

_AXIOMS = {
    ClassId.SIMPLE_GRAPH: "(forall x. !E(x,x)) & (forall x y. (E(x,y) <-> E(y,x)))",
    ClassId.BIPARTITE_GRAPH: _BIPARTITE,
    ClassId.BIPARTITE_GRAPH3: f"{_BIPARTITE} & {_at_least_three('L')} & {_at_least_three('R')}",
    ClassId.TWO_EQ: f"{_equivalence('P')} & {_equivalence('Q')}",
    ClassId.LEQ: ("(forall x. !(x < x)) & (forall x y z. (x < y & y < z -> x < z)) & "
                  "(forall x y. (x < y | y < x | x = y)) & "
                  "(forall x. x ~ x) & (forall x y. (x ~ y -> y ~ x)) & "
                  "(forall x y z. (x ~ y & y ~ z -> x ~ z))"),
}


def axiom(c):
    """A single sentence whose finite models are exactly the members of ``c``."""
    c = ClassId(c)
    if c is ClassId.ALL:
        raise ValueError("the class of all structures has no axiom")
    return parse(_AXIOMS[c])


def validate(c, structure):
    c = ClassId(c)
    if c is ClassId.ALL:
        return True
    if structure.signature != signature_of(c):
        raise SignatureError(
            f"class {c.value} expects signature {dict(signature_of(c))}, "
            f"got {dict(structure.signature)}")
    return evaluate(structure, axiom(c))


# ---------------------------------------------------------------- generators

def _random_partition(rng, size):
    labels = [rng.randrange(size) for _ in range(size)]
    classes = {}
    for a, lab in enumerate(labels):
        classes.setdefault(lab, []).append(a)
    return list(classes.values())


def _bipartite(m, n, edges):
    left, right = range(m), range(m, m + n)
    names = {f"l{i + 1}": a for i, a in enumerate(left)}
    names.update({f"r{j + 1}": b for j, b in enumerate(right)})
    return FiniteStructure(_SIGNATURES[ClassId.BIPARTITE_GRAPH], m + n,
                           {"L": [(a,) for a in left], "R": [(b,) for b in right],
                            "E": edges}, names)


def gen_random(c, seed, *, size=None, m=None, n=None, p=0.5):
    """A seeded random member of class ``c``.

    Bipartite classes take ``m`` left and ``n`` right vertices and an edge
    probability ``p``; simple graphs take ``size`` and ``p``; ``2eq`` and
    ``leq`` take ``size`` and draw random partitions."""
    c = ClassId(c)
    rng = random.Random(seed)
    if c in (ClassId.BIPARTITE_GRAPH, ClassId.BIPARTITE_GRAPH3):
        if m is None or n is None:
            raise ValueError("bipartite generators need m and n")
        least = 3 if c is ClassId.BIPARTITE_GRAPH3 else 0
        if m < least or n < least or m + n < 1:
            raise ValueError(f"{c.value} needs m, n >= {least} and at least one vertex")
        _check_p(p)
        edges = [(i, m + j) for i in range(m) for j in range(n) if rng.random() < p]
        return _bipartite(m, n, edges)
    if size is None or size < 1:
        raise ValueError(f"{c.value} needs a positive size")
    if c is ClassId.SIMPLE_GRAPH:
        _check_p(p)
        edges = []
        for a, b in itertools.combinations(range(size), 2):
            if rng.random() < p:
                edges += [(a, b), (b, a)]
        return FiniteStructure(_SIGNATURES[c], size, {"E": edges})
    if c is ClassId.TWO_EQ:
        return from_partitions(_SIGNATURES[c], size,
                               {"P": _random_partition(rng, size),
                                "Q": _random_partition(rng, size)})
    if c is ClassId.LEQ:
        order = list(range(size))
        rng.shuffle(order)
        lt = [(order[i], order[j]) for i in range(size) for j in range(i + 1, size)]
        eq = from_partitions(Signature({"~": 2}), size, {"~": _random_partition(rng, size)})
        return FiniteStructure(_SIGNATURES[c], size, {"<": lt, "~": eq.relations["~"]})
    raise ValueError(f"no random generator for {c.value}")


def _check_p(p):
    if not 0 <= p <= 1:
        raise ValueError(f"edge probability must lie in [0, 1], got {p}")


# ---------------------------------------------------------------- members

def set_partitions(n):
    """All partitions of ``range(n)`` via restricted growth strings."""
    def grow(prefix, top):
        if len(prefix) == n:
            classes = [[] for _ in range(top + 1)]
            for a, lab in enumerate(prefix):
                classes[lab].append(a)
            yield classes
            return
        for lab in range(top + 2):
            yield from grow(prefix + [lab], max(top, lab))
    if n == 0:
        yield []
        return
    yield from grow([0], 0)


def _bell(n):
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def _guard(count, cap):
    limit = slot_cap(cap)
    if count > 1 << limit:
        raise CapExceeded(f"about 2^{math.log2(count):.1f} members exceed the cap of 2^{limit}")


def members(c, size, signature=None, cap=None):
    """Members of class ``c`` of the given size.

    Isomorphism-invariant searches only need one labelling per shape where
    a canonical layout exists: bipartite graphs put the left part first and
    linear orders are the natural order on ``0..size-1``.  Graphs and pairs
    of equivalences are enumerated over all labellings."""
    c = ClassId(c)
    if c is ClassId.ALL:
        if signature is None:
            raise ValueError("the class of all structures needs a signature")
        yield from enumerate_structures(signature, size, cap)
        return
    sig = _SIGNATURES[c]
    if c is ClassId.SIMPLE_GRAPH:
        pairs = list(itertools.combinations(range(size), 2))
        _guard(2 ** len(pairs), cap)
        for mask in range(1 << len(pairs)):
            edges = []
            for i, (a, b) in enumerate(pairs):
                if mask >> i & 1:
                    edges += [(a, b), (b, a)]
            yield FiniteStructure(sig, size, {"E": edges})
    elif c in (ClassId.BIPARTITE_GRAPH, ClassId.BIPARTITE_GRAPH3):
        least = 3 if c is ClassId.BIPARTITE_GRAPH3 else 0
        sides = [m for m in range(size + 1) if m >= least and size - m >= least]
        _guard(sum(2 ** (m * (size - m)) for m in sides), cap)
        for m in sides:
            slots = [(i, j) for i in range(m) for j in range(m, size)]
            for mask in range(1 << len(slots)):
                edges = [t for i, t in enumerate(slots) if mask >> i & 1]
                yield _bipartite(m, size - m, edges)
    elif c is ClassId.TWO_EQ:
        _guard(_bell(size) ** 2, cap)
        parts = list(set_partitions(size))
        for pp in parts:
            for qq in parts:
                yield from_partitions(sig, size, {"P": pp, "Q": qq})
    elif c is ClassId.LEQ:
        _guard(_bell(size), cap)
        lt = [(a, b) for a in range(size) for b in range(a + 1, size)]
        for eq in set_partitions(size):
            rel = [(a, b) for cls in eq for a in cls for b in cls]
            yield FiniteStructure(sig, size, {"<": lt, "~": rel})


def class_signature_for(c, phi):
    """Signature searched for ``phi`` within class ``c``."""
    c = ClassId(c)
    if c is ClassId.ALL:
        return Signature({r: min(a) for r, a in relations_used(phi).items()})
    return signature_of(c)
