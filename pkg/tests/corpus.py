"""Formula corpora and a seeded random sentence generator for the tests."""

import random

from fointerp.structures import Signature
from fointerp.syntax import (And, Atom, Eq, Exists, Forall, Iff, Implies, Not, Or,
                             free_vars, parse)

SIG_E = Signature(E=2)
SIG_UE = Signature(U=1, E=2)
SIG_AB = Signature(A=1, B=1)
SIG_LRE = Signature(L=1, R=1, E=2)
SIG_PQ = Signature(P=2, Q=2)
SIG_LEQ = Signature({"<": 2, "~": 2})

# (text, signature); free variables are allowed and get all assignments
CORPUS = [
    ("forall x. !E(x,x)", SIG_E),
    ("exists x. forall y. E(x,y)", SIG_E),
    ("forall x. exists y. x = y", SIG_E),
    ("forall x y. exists z. (E(x,z) & E(z,y))", SIG_E),
    ("!(forall x. E(x,x))", SIG_E),
    ("!(E(x,y) -> E(y,x))", SIG_E),
    ("forall x. E(x,y)", SIG_E),
    ("exists x. exists y. x = y", SIG_E),
    ("forall x. ((exists y. E(x,y)) -> exists z. (E(z,x) & !(z = x)))", SIG_E),
    ("(forall x. exists y. E(x,y)) <-> (exists x. forall y. !E(y,x))", SIG_E),
    ("forall x y. (E(x,y) <-> E(y,x)) & !(exists x. E(x,x))", SIG_E),
    ("exists x. (U(x) & forall y. (E(x,y) | x = y | !U(y)))", SIG_UE),
    ("(exists x. U(x)) | (forall y. E(y,y))", SIG_UE),
    ("forall x. (U(x) -> exists y. (E(x,y) & forall z. (E(y,z) -> U(z))))", SIG_UE),
    ("!(exists x. U(x) <-> forall y. E(y,x))", SIG_UE),
    ("(exists x. A(x)) & (exists y. B(y))", SIG_AB),
    ("(exists x. A(x)) | (forall y. B(y))", SIG_AB),
    ("forall x. (A(x) <-> !B(x))", SIG_AB),
    ("forall x. (L(x) <-> !R(x))", SIG_LRE),
    ("forall x y. (E(x,y) -> L(x) & R(y))", SIG_LRE),
    ("exists u1 u2 u3. (L(u1) & L(u2) & L(u3) & !(u1 = u2) & !(u1 = u3) & !(u2 = u3))", SIG_LRE),
    ("exists u v w. P(u,v) & Q(v,w)", SIG_PQ),
    ("!!P(x,y)", SIG_PQ),
    ("P(x,x)", SIG_PQ),
    ("forall x y z. (P(x,y) & P(y,z) -> P(x,z))", SIG_PQ),
    ("forall x. exists y. (P(x,y) & !Q(x,y))", SIG_PQ),
    ("forall x. (y < x -> !(x ~ y)) & forall x1 x2. (x1 < x2 & x2 < y -> !(x1 ~ x2))", SIG_LEQ),
    ("exists x1 x2 x3. (x ~ x1 & x1 ~ x2 & x2 ~ x3 & x < x1 & x1 < x2 & x2 < x3)", SIG_LEQ),
    ("forall x y. (x < y | y < x | x = y)", SIG_LEQ),
]


def corpus():
    return [(parse(t), s) for t, s in CORPUS]


# ---------------------------------------------------------------- random sentences

def random_formula(rng, signature, rank, scope=(), size=4):
    """A random formula of quantifier rank at most ``rank`` whose free
    variables are among ``scope``."""
    names = [v for v in ("x", "y", "z", "w") if v not in scope]
    options = []
    if scope:
        options += ["atom"] * 3 + ["eq"]
    if size > 1:
        options += ["not", "and", "or", "imp", "iff"]
    if rank > 0 and names:
        options += ["exists", "forall"] * 2
    if not options:
        options = ["exists"] if rank > 0 else ["atom"]
    op = rng.choice(options)
    if op == "atom":
        rel = rng.choice(sorted(signature))
        return Atom(rel, tuple(rng.choice(scope) for _ in range(signature[rel])))
    if op == "eq":
        return Eq(rng.choice(scope), rng.choice(scope))
    if op == "not":
        return Not(random_formula(rng, signature, rank, scope, size - 1))
    if op in ("exists", "forall"):
        v = names[0]
        body = random_formula(rng, signature, rank - 1, scope + (v,), size - 1)
        return (Exists if op == "exists" else Forall)((v,), body)
    left = random_formula(rng, signature, rank, scope, size // 2)
    right = random_formula(rng, signature, rank, scope, size // 2)
    return {"and": lambda: And((left, right)), "or": lambda: Or((left, right)),
            "imp": lambda: Implies(left, right), "iff": lambda: Iff(left, right)}[op]()


def random_sentence(rng, signature, rank=2, size=5):
    while True:
        phi = random_formula(rng, signature, rank, (), size)
        if not free_vars(phi) and any(isinstance(phi, k) for k in (Exists, Forall, Not, And, Or)):
            return phi


def _matrix(rng, signature, vs, size=3):
    def lit():
        if rng.random() < 0.15 and len(vs) > 1:
            a = Eq(rng.choice(vs), rng.choice(vs))
        else:
            rel = rng.choice(sorted(signature))
            a = Atom(rel, tuple(rng.choice(vs) for _ in range(signature[rel])))
        return Not(a) if rng.random() < 0.4 else a
    parts = [lit() for _ in range(size)]
    out = parts[0]
    for p in parts[1:]:
        out = (And if rng.random() < 0.5 else Or)((out, p))
    return out


def prefix_sentence(rng, signature, pattern):
    """Prenex sentence with the given block pattern, such as ``"EA"``."""
    vs, blocks, k = [], [], 0
    for q in pattern:
        width = rng.choice((1, 1, 2))
        names = tuple(f"v{k + i}" for i in range(width))
        k += width
        blocks.append((Exists if q == "E" else Forall, names))
        vs.extend(names)
    out = _matrix(rng, signature, vs, size=rng.choice((2, 3, 4)))
    for cls, names in reversed(blocks):
        out = cls(names, out)
    return out


def random_rng(seed):
    return random.Random(seed)
