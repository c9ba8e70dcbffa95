"""The four model constructions and their translation schemas.

``BIG2EQ_P`` and ``BIG2EQ`` encode a bipartite graph ``(L, R, E)`` into a
pair of equivalences ``(P, Q)``; the parameter-free variant replaces the
four parameters by definable marker classes.  ``TWOEQ2LEQ_P`` and
``TWOEQ2LEQ`` encode a pair of equivalences into a strict linear order
``<`` with an equivalence ``~``.

Every build keeps the source structure on indices ``0..|A|-1`` of the
target, so the identity is the expected embedding, and attaches a name
table for the special elements:

=================  ==============================================
``l1 .. lm``       left vertices, in ascending index order
``r1 .. rn``       right vertices
``sL{i}_{j}``      edge-slot triple of the pair ``(l_i, r_j)``
``sR{i}_{j}``      (same P-class as ``sL{i}_{j}``)
``sE{i}_{j}``
``cL cR cP cN``    parameter elements of ``BIG2EQ_P``
``cL1 .. cL1~``    marker classes of ``BIG2EQ`` (``~`` marks the tilde copy)
``a1 .. ak``       elements of a source pair of equivalences
``a1~``            tilde copies (``TWOEQ2LEQ``)
``s{k}_{i}``       separators of the ``i``-th P-class, ``k`` in 0, 1, 2
``r{k}_{j}``       separators of the ``j``-th Q-class (``TWOEQ2LEQ``)
``c1 .. c4``       the four-element class defining ``c1``
``a*``             the parameter element of ``TWOEQ2LEQ_P``
=================  ==============================================
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

from .classes import ClassId, signature_of, validate
from .interpret import InterpretationSchema, Witness
from .structures import FiniteStructure, from_partitions, partition_of
from .syntax import And, Atom, Exists, Not, Or, conj, disj, parse, substitute

__all__ = ["ConstructionKind", "build", "schema", "theta", "pbar",
           "marker_formula", "q_link_count", "schema_leq_as_printed",
           "BIG2EQ_MARKERS"]


class ConstructionKind(str, enum.Enum):
    BIG2EQ_P = "big2eq-param"
    BIG2EQ = "big2eq"
    TWOEQ2LEQ_P = "2eq2leq-param"
    TWOEQ2LEQ = "2eq2leq"


SOURCE = {
    ConstructionKind.BIG2EQ_P: ClassId.BIPARTITE_GRAPH,
    ConstructionKind.BIG2EQ: ClassId.BIPARTITE_GRAPH3,
    ConstructionKind.TWOEQ2LEQ_P: ClassId.TWO_EQ,
    ConstructionKind.TWOEQ2LEQ: ClassId.TWO_EQ,
}
TARGET = {
    ConstructionKind.BIG2EQ_P: ClassId.TWO_EQ,
    ConstructionKind.BIG2EQ: ClassId.TWO_EQ,
    ConstructionKind.TWOEQ2LEQ_P: ClassId.LEQ,
    ConstructionKind.TWOEQ2LEQ: ClassId.LEQ,
}

# plain and tilde sizes of the marker classes of BIG2EQ, and how many
# leading (plain, tilde) pairs share a Q-class
BIG2EQ_MARKERS = {"L": (4, 4, 4), "R": (3, 5, 3), "P": (6, 6, 2), "N": (7, 7, 1)}


# ---------------------------------------------------------------- formula kit

def pbar(rel, vs):
    """``rel(v_i, v_j)`` for all ``i, j`` (the abbreviations P-bar and Q-bar)."""
    return conj(*(Atom(rel, (a, b)) for a in vs for b in vs))


def _nq(vs):
    return [Not(Atom("Q", (a, b))) for a in vs for b in vs if a != b]


def theta(k1, k2, k3, xs=None, ys=None):
    """Theta_{k1,k2,k3}(x, y): two P-classes of at least ``k1`` and ``k2``
    pairwise Q-unrelated elements, joined by ``k3`` Q-links.

    The pairwise ``!Q`` conjuncts range over ``i != j``; with ``i = j``
    they would contradict the reflexivity of ``Q``."""
    for k in (k1, k2, k3):
        if not isinstance(k, int) or k < 1:
            raise ValueError(f"theta needs positive integer indices, got {(k1, k2, k3)}")
    if k3 > min(k1, k2):
        raise ValueError(f"theta needs k3 <= min(k1, k2), got {(k1, k2, k3)}")
    xs = tuple(xs or (f"x{i}" for i in range(1, k1 + 1)))
    ys = tuple(ys or (f"y{i}" for i in range(1, k2 + 1)))
    if len(xs) != k1 or len(ys) != k2:
        raise ValueError("variable lists do not match k1, k2")
    parts = [pbar("P", xs), pbar("P", ys), Not(Atom("P", (xs[0], ys[0])))]
    parts += _nq(xs) + _nq(ys)
    parts += [Atom("Q", (xs[i], ys[i])) for i in range(k3)]
    return And(tuple(_flatten(parts)))


def _flatten(parts):
    for p in parts:
        if isinstance(p, And):
            yield from p.parts
        else:
            yield p


def _vs(prefix, k):
    return tuple(f"{prefix}{i}" for i in range(1, k + 1))


def _psi_one_side(k1, k2, k3):
    ys, zs = _vs("y", k1 - 1), _vs("z", k2)
    return Exists(ys + zs, theta(k1, k2, k3, ys + ("x",), zs))


def _psi_two_sides(k1, k2, k3):
    ys, zs = _vs("y", k1 - 1), _vs("z", k2)
    return Exists(ys + zs, Or((theta(k1, k2, k3, ("x",) + ys, zs),
                               theta(k1, k2, k3, ys + ("x",), zs))))


def _psi_leq():
    return parse("exists x1 x2 x3. (x ~ x1 & x1 ~ x2 & x2 ~ x3 & x < x1 & x1 < x2 & x2 < x3)")


def _astar():
    return parse("(forall x. (y < x -> !(x ~ y))) & "
                 "(forall x1 x2. (x1 < x2 & x2 < y -> !(x1 ~ x2)))")


_MARKERS = {
    "PsiL": lambda: _psi_one_side(5, 4, 4),
    "PsiR": lambda: _psi_one_side(6, 5, 3),
    "PsiP": lambda: _psi_two_sides(6, 6, 2),
    "PsiN": lambda: _psi_two_sides(7, 7, 1),
    "Psi": _psi_leq,
    "AStar": _astar,
}


def marker_formula(name):
    """One of ``PsiL PsiR PsiP PsiN`` (BIG2EQ markers, free ``x``), ``Psi``
    (the class of ``c1``, free ``x``) or ``AStar`` (``a*``, free ``y``)."""
    try:
        return _MARKERS[name]()
    except KeyError:
        raise ValueError(f"unknown marker formula {name!r}; "
                         f"expected one of {', '.join(_MARKERS)}") from None


def _at(phi, **m):
    return substitute(phi, m)


# ---------------------------------------------------------------- schemas

def _schema_big2eq_p():
    u = parse("(!Q(x,yL) & P(x,yL)) | (!Q(x,yR) & P(x,yR))")
    link = pbar("P", ("uL", "uR", "uE"))

    def edge(marker):
        return Exists(("uL", "uR", "uE"), conj(
            Atom("Q", ("x1", "uL")), Atom("Q", ("x2", "uR")), link,
            Atom("Q", ("uE", marker))))

    pos_e = conj(parse("P(x1,yL)"), parse("P(x2,yR)"), edge("yP"))
    neg_e = disj(parse("!P(x1,yL)"), parse("!P(x2,yR)"), edge("yN"))
    return InterpretationSchema(
        source=signature_of(ClassId.BIPARTITE_GRAPH),
        target=signature_of(ClassId.TWO_EQ),
        params=("yL", "yR", "yP", "yN"),
        phi_u=u,
        relations={
            "L": (parse("P(x1,yL)"), parse("!P(x1,yL)")),
            "R": (parse("P(x1,yR)"), parse("!P(x1,yR)")),
            "E": (pos_e, neg_e),
        })


def _schema_big2eq():
    psi = {k: marker_formula(k) for k in ("PsiL", "PsiR", "PsiP", "PsiN")}
    link = pbar("P", ("uL", "uR", "uE"))

    def edge(marker, name):
        return Exists(("uL", "uR", "uE", name), conj(
            _at(psi[marker], x=name), Atom("Q", ("x1", "uL")),
            Atom("Q", ("x2", "uR")), link, Atom("Q", ("uE", name))))

    left, right = _at(psi["PsiL"], x="x1"), _at(psi["PsiR"], x="x2")
    pos_e = conj(left, right, edge("PsiP", "uP"))
    neg_e = disj(_at(psi["PsiR"], x="x1"), _at(psi["PsiL"], x="x2"), edge("PsiN", "uN"))
    return InterpretationSchema(
        source=signature_of(ClassId.BIPARTITE_GRAPH3),
        target=signature_of(ClassId.TWO_EQ),
        params=(),
        phi_u=Or((psi["PsiL"], psi["PsiR"])),
        relations={
            "L": (_at(psi["PsiL"], x="x1"), _at(psi["PsiR"], x="x1")),
            "R": (_at(psi["PsiR"], x="x1"), _at(psi["PsiL"], x="x1")),
            "E": (pos_e, neg_e),
        })


def _schema_leq_p():
    not_u = parse("exists z0. (z0 ~ x & !(y < z0))")
    neg_p = Exists(("z",), And((
        _at(not_u, x="z"),
        parse("(x1 < z & z < x2) | (x2 < z & z < x1)"))))
    return InterpretationSchema(
        source=signature_of(ClassId.TWO_EQ),
        target=signature_of(ClassId.LEQ),
        params=("y",),
        phi_u=parse("exists z0 z1 z2. (z0 ~ z1 & z1 ~ z2 & z0 < y & y < z1 & z1 < x & x < z2)"),
        phi_not_u=not_u,
        relations={
            "P": (parse("exists z0 z1 z2. (z0 ~ z1 & z1 ~ z2 & z0 < y & y < z1 & "
                        "z1 < x1 & x1 < z2 & z1 < x2 & x2 < z2)"), neg_p),
            "Q": (parse("x1 ~ x2"), parse("!(x1 ~ x2)")),
        })


_FRAME = "y0 < y & y < y1 & y1 < y2 & y0 ~ y1 & y1 ~ y2"


def _schema_leq(repaired=True):
    psi = _at(_psi_leq(), x="y")

    def frame(vs, body):
        return Exists(vs, And((psi, parse(f"{_FRAME} & ({body})"))))

    # the P-formulas must read x1, x2 through their tilde copies z1, z2;
    # "x_i < z_i" pins z_i to the copy instead of x_i itself
    pin = " & x1 < z1 & x2 < z2" if repaired else ""
    pos_p = frame(("y0", "y1", "y2", "z1", "z2"),
                  f"z1 ~ x1 & z2 ~ x2 & y1 < z1 & z1 < y2 & y1 < z2 & z2 < y2{pin}")
    neg_p = frame(("y0", "y1", "y2", "z1", "z2"),
                  f"z1 ~ x1 & z2 ~ x2{pin} & ((z1 < y2 & y2 < z2) | (z2 < y2 & y2 < z1))")
    pos_q = frame(("y0", "y1", "y2"), "y1 < x1 & x1 < y2 & y1 < x2 & x2 < y2")
    neg_q = frame(("y0", "y1", "y2"), "(x1 < y2 & y2 < x2) | (x2 < y2 & y2 < x1)")
    u = Exists(("y", "y0", "y1", "y2", "z"), And((
        psi, parse("y0 < y & y < y1 & y1 < x & x < y2 & y0 ~ y1 & y1 ~ y2 & x ~ z & x < z"))))
    pos_p, neg_p, pos_q, neg_q = (Exists(("y",), f) for f in (pos_p, neg_p, pos_q, neg_q))
    return InterpretationSchema(
        source=signature_of(ClassId.TWO_EQ),
        target=signature_of(ClassId.LEQ),
        params=(),
        phi_u=u,
        relations={"P": (pos_p, neg_p), "Q": (pos_q, neg_q)})


def schema_leq_as_printed():
    """The parameter-free LEq schema without the ``x_i < z_i`` pins.

    Kept for comparison: a triple bracketing a Q-class then lets ``z_i``
    be ``x_i`` itself, so ``Phi_P`` also holds on Q-related pairs."""
    return _schema_leq(repaired=False)


_SCHEMAS = {
    ConstructionKind.BIG2EQ_P: _schema_big2eq_p,
    ConstructionKind.BIG2EQ: _schema_big2eq,
    ConstructionKind.TWOEQ2LEQ_P: _schema_leq_p,
    ConstructionKind.TWOEQ2LEQ: _schema_leq,
}


def schema(kind):
    return _SCHEMAS[ConstructionKind(kind)]()


# ---------------------------------------------------------------- builds

@dataclass
class _Carrier:
    """Allocates named elements after the embedded source elements."""
    size: int
    names: dict = field(default_factory=dict)

    def add(self, name):
        self.names[name] = self.size
        self.size += 1
        return self.size - 1


def _sides(A):
    left = sorted(t[0] for t in A.relations["L"])
    right = sorted(t[0] for t in A.relations["R"])
    return left, right


def _edge_gadgets(A, car, left, right):
    """Vertex and edge-slot classes shared by both bipartite builds."""
    names = car.names
    for i, a in enumerate(left, 1):
        names[f"l{i}"] = a
    for j, b in enumerate(right, 1):
        names[f"r{j}"] = b
    p_classes, q_left, q_right, edges, non_edges = [], [], [], [], []
    for i, a in enumerate(left, 1):
        q_left.append([a])
    for j, b in enumerate(right, 1):
        q_right.append([b])
    for i, a in enumerate(left, 1):
        for j, b in enumerate(right, 1):
            sl, sr, se = (car.add(f"s{k}{i}_{j}") for k in "LRE")
            p_classes.append([sl, sr, se])
            q_left[i - 1].append(sl)
            q_right[j - 1].append(sr)
            (edges if A.holds("E", a, b) else non_edges).append(se)
    return p_classes, q_left + q_right, edges, non_edges


def _require(kind, A):
    c = SOURCE[kind]
    if kind is ConstructionKind.BIG2EQ_P:
        ok = validate(ClassId.BIPARTITE_GRAPH, A)
    else:
        ok = validate(c, A)
    if not ok:
        raise ValueError(f"{kind.value} needs a member of class {c.value}")


def _build_big2eq_p(A):
    left, right = _sides(A)
    car = _Carrier(A.size)
    p_classes, q_classes, edges, non_edges = _edge_gadgets(A, car, left, right)
    cL, cR, cP, cN = (car.add(n) for n in ("cL", "cR", "cP", "cN"))
    p_classes += [[cL] + left, [cR] + right, [cP], [cN]]
    q_classes += [[cP] + edges, [cN] + non_edges, [cL], [cR]]
    B = from_partitions(signature_of(ClassId.TWO_EQ), car.size,
                        {"P": p_classes, "Q": q_classes}, car.names)
    return Witness(B, {"yL": cL, "yR": cR, "yP": cP, "yN": cN},
                   embedding=list(A.universe))


def _build_big2eq(A):
    left, right = _sides(A)
    car = _Carrier(A.size)
    p_classes, q_classes, edges, non_edges = _edge_gadgets(A, car, left, right)
    plain, tilde = {}, {}
    for tag, (np_, nt, _) in BIG2EQ_MARKERS.items():
        plain[tag] = [car.add(f"c{tag}{k}") for k in range(1, np_ + 1)]
        tilde[tag] = [car.add(f"c{tag}{k}~") for k in range(1, nt + 1)]
    p_classes += [plain["L"] + left, tilde["L"], plain["R"] + right, tilde["R"],
                  plain["P"], tilde["P"], plain["N"], tilde["N"]]
    # the last plain P- and N-markers join the edge and non-edge classes
    hub_p, hub_n = plain["P"][-1], plain["N"][-1]
    q_classes += [[hub_p] + edges, [hub_n] + non_edges]
    for tag, (np_, nt, links) in BIG2EQ_MARKERS.items():
        for k in range(links):
            q_classes.append([plain[tag][k], tilde[tag][k]])
        for e in plain[tag][links:] + tilde[tag][links:]:
            if e not in (hub_p, hub_n):
                q_classes.append([e])
    B = from_partitions(signature_of(ClassId.TWO_EQ), car.size,
                        {"P": p_classes, "Q": q_classes}, car.names)
    return Witness(B, {}, embedding=list(A.universe))


def _leq_structure(size, chain, classes, names):
    lt = [(a, b) for i, a in enumerate(chain) for b in chain[i + 1:]]
    eq = [(a, b) for cls in classes for a in cls for b in cls]
    return FiniteStructure(signature_of(ClassId.LEQ), size, {"<": lt, "~": eq}, names)


def _build_leq_p(A):
    p_classes, q_classes = partition_of(A, "P"), partition_of(A, "Q")
    n = len(p_classes)
    car = _Carrier(A.size)
    for a in A.universe:
        car.names[f"a{a + 1}"] = a
    s = {(k, i): car.add(f"s{k}_{i}") for i in range(1, n + 1) for k in range(3)}
    star = car.add("a*")
    chain = [s[0, i] for i in range(1, n + 1)] + [star]
    for i, cls in enumerate(p_classes, 1):
        chain += [s[1, i]] + cls + [s[2, i]]
    classes = [[s[0, i], s[1, i], s[2, i]] for i in range(1, n + 1)]
    classes += q_classes + [[star]]
    B = _leq_structure(car.size, chain, classes, car.names)
    return Witness(B, {"y": star}, embedding=list(A.universe))


def _build_leq(A):
    p_classes, q_classes = partition_of(A, "P"), partition_of(A, "Q")
    n, m = len(p_classes), len(q_classes)
    car = _Carrier(A.size)
    for a in A.universe:
        car.names[f"a{a + 1}"] = a
    copy = {a: car.add(f"a{a + 1}~") for a in A.universe}
    s = {(k, i): car.add(f"s{k}_{i}") for i in range(1, n + 1) for k in range(3)}
    r = {(k, j): car.add(f"r{k}_{j}") for j in range(1, m + 1) for k in range(3)}
    c = [car.add(f"c{k}") for k in range(1, 5)]
    chain = [s[0, i] for i in range(1, n + 1)] + [r[0, j] for j in range(1, m + 1)] + c
    for j, cls in enumerate(q_classes, 1):
        chain += [r[1, j]] + cls + [r[2, j]]
    for i, cls in enumerate(p_classes, 1):
        chain += [s[1, i]] + [copy[a] for a in cls] + [s[2, i]]
    classes = [[a, copy[a]] for a in A.universe]
    classes += [[s[0, i], s[1, i], s[2, i]] for i in range(1, n + 1)]
    classes += [[r[0, j], r[1, j], r[2, j]] for j in range(1, m + 1)]
    classes.append(c)
    B = _leq_structure(car.size, chain, classes, car.names)
    return Witness(B, {}, embedding=list(A.universe))


_BUILDERS = {
    ConstructionKind.BIG2EQ_P: _build_big2eq_p,
    ConstructionKind.BIG2EQ: _build_big2eq,
    ConstructionKind.TWOEQ2LEQ_P: _build_leq_p,
    ConstructionKind.TWOEQ2LEQ: _build_leq,
}


def build(kind, A):
    """Witness ``(B, params, names)`` encoding ``A`` for the given kind."""
    kind = ConstructionKind(kind)
    _require(kind, A)
    return _BUILDERS[kind](A)


# ---------------------------------------------------------------- link counts

def q_link_count(S, a, b):
    """Number of Q-pairs between the P-classes of ``a`` and ``b``."""
    P, Q = S.relations["P"], S.relations["Q"]
    if (a, b) in P:
        raise ValueError(f"elements {a} and {b} lie in the same P-class")
    ca = [u for u in S.universe if (a, u) in P]
    cb = [v for v in S.universe if (b, v) in P]
    return sum((u, v) in Q for u, v in itertools.product(ca, cb))
