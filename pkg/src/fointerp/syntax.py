"""First-order formulas over relational signatures.

The AST is immutable and hashable.  This module also holds the concrete
syntax (``parse``/``render``), negation normal form, prenexing and the
Sigma/Pi prefix classifier.

Concrete syntax::

    forall x y. (E(x,y) -> !(x = y))
    exists z0 z1. (z0 ~ z1 & z0 < z1)

Connectives bind ``!`` > ``&`` > ``|`` > ``->`` > ``<->``; both arrows are
right-associative.  A quantifier body extends as far right as possible.
``<`` and ``~`` are the two infix relation symbols (``x > y`` reads as
``y < x``).  The Unicode aliases ``∀ ∃ ¬ ∧ ∨ → ↔ ≈ ≠`` are accepted.
"""

from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass, field

__all__ = [
    "Formula", "Atom", "Eq", "Not", "And", "Or", "Implies", "Iff",
    "Exists", "Forall", "conj", "disj", "ParseError", "parse", "render",
    "free_vars", "bound_vars", "variables", "relations_used", "substitute",
    "rename_apart", "to_nnf", "to_prenex", "prefix_blocks", "classify",
    "Kind", "PrefixClass", "is_quantifier_free", "quantifier_rank",
    "INFIX_RELATIONS",
]

INFIX_RELATIONS = ("<", "~")


class Formula:
    """Base class of all AST nodes."""

    __slots__ = ()

    def __str__(self):
        return render(self)


def _node(cls):
    # frozen dataclass with the hash computed once at construction
    cls = dataclass(frozen=True, slots=True)(cls)
    cls.__hash__ = lambda self: self._h
    return cls


def _seal(obj, *key):
    object.__setattr__(obj, "_h", hash((type(obj).__name__,) + key))


@_node
class Atom(Formula):
    rel: str
    args: tuple
    _h: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        _seal(self, self.rel, self.args)


@_node
class Eq(Formula):
    left: str
    right: str
    _h: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _seal(self, self.left, self.right)


@_node
class Not(Formula):
    body: Formula
    _h: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _seal(self, self.body)


@_node
class And(Formula):
    parts: tuple
    _h: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        if len(self.parts) < 2:
            raise ValueError("And needs at least two parts; use conj()")
        _seal(self, self.parts)


@_node
class Or(Formula):
    parts: tuple
    _h: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        if len(self.parts) < 2:
            raise ValueError("Or needs at least two parts; use disj()")
        _seal(self, self.parts)


@_node
class Implies(Formula):
    left: Formula
    right: Formula
    _h: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _seal(self, self.left, self.right)


@_node
class Iff(Formula):
    left: Formula
    right: Formula
    _h: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _seal(self, self.left, self.right)


@_node
class Exists(Formula):
    vars: tuple
    body: Formula
    _h: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        if not self.vars:
            raise ValueError("quantifier with an empty variable list")
        _seal(self, self.vars, self.body)


@_node
class Forall(Formula):
    vars: tuple
    body: Formula
    _h: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        if not self.vars:
            raise ValueError("quantifier with an empty variable list")
        _seal(self, self.vars, self.body)


def conj(*parts):
    """Conjunction of one or more formulas (a single part is returned as is)."""
    if not parts:
        raise ValueError("empty conjunction")
    return parts[0] if len(parts) == 1 else And(parts)


def disj(*parts):
    if not parts:
        raise ValueError("empty disjunction")
    return parts[0] if len(parts) == 1 else Or(parts)


# ---------------------------------------------------------------- traversal

def free_vars(phi):
    """Set of variables with a free occurrence in ``phi``."""
    if isinstance(phi, Atom):
        return set(phi.args)
    if isinstance(phi, Eq):
        return {phi.left, phi.right}
    if isinstance(phi, Not):
        return free_vars(phi.body)
    if isinstance(phi, (And, Or)):
        out = set()
        for p in phi.parts:
            out |= free_vars(p)
        return out
    if isinstance(phi, (Implies, Iff)):
        return free_vars(phi.left) | free_vars(phi.right)
    if isinstance(phi, (Exists, Forall)):
        return free_vars(phi.body) - set(phi.vars)
    raise TypeError(f"not a formula: {phi!r}")


def _children(phi):
    if isinstance(phi, (Atom, Eq)):
        return ()
    if isinstance(phi, Not):
        return (phi.body,)
    if isinstance(phi, (And, Or)):
        return phi.parts
    if isinstance(phi, (Implies, Iff)):
        return (phi.left, phi.right)
    if isinstance(phi, (Exists, Forall)):
        return (phi.body,)
    raise TypeError(f"not a formula: {phi!r}")


def _walk(phi):
    stack = [phi]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(_children(node))


def bound_vars(phi):
    out = set()
    for node in _walk(phi):
        if isinstance(node, (Exists, Forall)):
            out.update(node.vars)
    return out


def variables(phi):
    """Every variable name occurring in ``phi``, free or bound."""
    out = set()
    for node in _walk(phi):
        if isinstance(node, Atom):
            out.update(node.args)
        elif isinstance(node, Eq):
            out.update((node.left, node.right))
        elif isinstance(node, (Exists, Forall)):
            out.update(node.vars)
    return out


def relations_used(phi):
    """Map relation symbol -> set of arities it is used with."""
    out = {}
    for node in _walk(phi):
        if isinstance(node, Atom):
            out.setdefault(node.rel, set()).add(len(node.args))
    return out


def is_quantifier_free(phi):
    return not any(isinstance(n, (Exists, Forall)) for n in _walk(phi))


def quantifier_rank(phi):
    """Maximal nesting depth of quantified variables."""
    if isinstance(phi, (Atom, Eq)):
        return 0
    if isinstance(phi, (Exists, Forall)):
        return len(phi.vars) + quantifier_rank(phi.body)
    return max(quantifier_rank(c) for c in _children(phi))


def _fresh(base, used):
    base = base.rstrip("0123456789_") or "v"
    for i in itertools.count(1):
        name = f"{base}_{i}"
        if name not in used:
            used.add(name)
            return name


def substitute(phi, mapping):
    """Capture-avoiding simultaneous renaming of free variables."""
    mapping = {k: v for k, v in mapping.items() if k != v}
    if not mapping:
        return phi
    used = variables(phi) | set(mapping.values()) | set(mapping)
    return _subst(phi, mapping, used)


def _subst(phi, m, used):
    if isinstance(phi, Atom):
        return Atom(phi.rel, tuple(m.get(a, a) for a in phi.args))
    if isinstance(phi, Eq):
        return Eq(m.get(phi.left, phi.left), m.get(phi.right, phi.right))
    if isinstance(phi, Not):
        return Not(_subst(phi.body, m, used))
    if isinstance(phi, And):
        return And(tuple(_subst(p, m, used) for p in phi.parts))
    if isinstance(phi, Or):
        return Or(tuple(_subst(p, m, used) for p in phi.parts))
    if isinstance(phi, Implies):
        return Implies(_subst(phi.left, m, used), _subst(phi.right, m, used))
    if isinstance(phi, Iff):
        return Iff(_subst(phi.left, m, used), _subst(phi.right, m, used))
    if isinstance(phi, (Exists, Forall)):
        inner = {k: v for k, v in m.items() if k not in phi.vars}
        body_free = free_vars(phi.body)
        # only targets that actually land inside the body can be captured
        targets = {v for k, v in inner.items() if k in body_free}
        new_vars = []
        for b in phi.vars:
            if b in targets:
                nb = _fresh(b, used)
                inner[b] = nb
                new_vars.append(nb)
            else:
                new_vars.append(b)
        if not inner:
            return type(phi)(tuple(new_vars), phi.body)
        return type(phi)(tuple(new_vars), _subst(phi.body, inner, used))
    raise TypeError(f"not a formula: {phi!r}")


def rename_apart(phi, avoid=()):
    """Rename bound variables so every binder is unique and none collides
    with a free variable of ``phi`` or with ``avoid``."""
    used = variables(phi) | set(avoid)
    taken = free_vars(phi) | set(avoid)
    return _rename(phi, {}, used, taken)


def _rename(phi, env, used, taken):
    if isinstance(phi, Atom):
        return Atom(phi.rel, tuple(env.get(a, a) for a in phi.args))
    if isinstance(phi, Eq):
        return Eq(env.get(phi.left, phi.left), env.get(phi.right, phi.right))
    if isinstance(phi, Not):
        return Not(_rename(phi.body, env, used, taken))
    if isinstance(phi, And):
        return And(tuple(_rename(p, env, used, taken) for p in phi.parts))
    if isinstance(phi, Or):
        return Or(tuple(_rename(p, env, used, taken) for p in phi.parts))
    if isinstance(phi, Implies):
        return Implies(_rename(phi.left, env, used, taken),
                       _rename(phi.right, env, used, taken))
    if isinstance(phi, Iff):
        return Iff(_rename(phi.left, env, used, taken),
                   _rename(phi.right, env, used, taken))
    if isinstance(phi, (Exists, Forall)):
        env = dict(env)
        new_vars = []
        for b in phi.vars:
            nb = b if b not in taken else _fresh(b, used)
            taken.add(nb)
            env[b] = nb
            new_vars.append(nb)
        return type(phi)(tuple(new_vars), _rename(phi.body, env, used, taken))
    raise TypeError(f"not a formula: {phi!r}")


# ---------------------------------------------------------------- NNF

def _flat(cls, parts):
    out = []
    for p in parts:
        if isinstance(p, cls):
            out.extend(p.parts)
        else:
            out.append(p)
    return out[0] if len(out) == 1 else cls(tuple(out))


def to_nnf(phi):
    """Negation normal form: no Implies/Iff, negation only on atoms."""
    return _nnf(phi, True)


def _nnf(phi, pos):
    if isinstance(phi, (Atom, Eq)):
        return phi if pos else Not(phi)
    if isinstance(phi, Not):
        return _nnf(phi.body, not pos)
    if isinstance(phi, And):
        return _flat(And if pos else Or, [_nnf(p, pos) for p in phi.parts])
    if isinstance(phi, Or):
        return _flat(Or if pos else And, [_nnf(p, pos) for p in phi.parts])
    if isinstance(phi, Implies):
        if pos:
            return _flat(Or, [_nnf(phi.left, False), _nnf(phi.right, True)])
        return _flat(And, [_nnf(phi.left, True), _nnf(phi.right, False)])
    if isinstance(phi, Iff):
        a, b = phi.left, phi.right
        if pos:
            return _flat(And, [_flat(Or, [_nnf(a, False), _nnf(b, True)]),
                               _flat(Or, [_nnf(b, False), _nnf(a, True)])])
        return _flat(Or, [_flat(And, [_nnf(a, True), _nnf(b, False)]),
                          _flat(And, [_nnf(a, False), _nnf(b, True)])])
    if isinstance(phi, Exists):
        return (Exists if pos else Forall)(phi.vars, _nnf(phi.body, pos))
    if isinstance(phi, Forall):
        return (Forall if pos else Exists)(phi.vars, _nnf(phi.body, pos))
    raise TypeError(f"not a formula: {phi!r}")


# ---------------------------------------------------------------- prenex

class Kind(str, enum.Enum):
    SIGMA = "Sigma"
    PI = "Pi"
    BOTH = "Both"


@dataclass(frozen=True)
class PrefixClass:
    kind: Kind
    k: int

    def __str__(self):
        return f"{self.kind.value} {self.k}"


class _QNode:
    __slots__ = ("kind", "vars", "children")

    def __init__(self, kind, vars, children):
        self.kind, self.vars, self.children = kind, vars, children


def _strip(phi):
    """Split an NNF formula into its quantifier forest and its matrix."""
    if isinstance(phi, (Atom, Eq, Not)):
        return phi, []
    if isinstance(phi, (And, Or)):
        mats, forest = [], []
        for p in phi.parts:
            m, f = _strip(p)
            mats.append(m)
            forest.extend(f)
        return _flat(type(phi), mats), forest
    if isinstance(phi, (Exists, Forall)):
        m, f = _strip(phi.body)
        kind = Exists if isinstance(phi, Exists) else Forall
        return m, [_QNode(kind, phi.vars, f)]
    raise TypeError(f"formula not in NNF: {phi!r}")


def _peel(forest, first):
    """Greedy layering of the quantifier forest starting with type ``first``.

    Each round takes every available quantifier of the current type,
    including those uncovered during the same round; this yields the
    fewest blocks among prefixes starting with ``first``."""
    avail = list(forest)
    blocks = []
    cur = first
    while avail:
        taken = []
        i = 0
        while i < len(avail):
            q = avail[i]
            if q.kind is cur:
                taken.extend(q.vars)
                avail.pop(i)
                avail[i:i] = q.children
            else:
                i += 1
        if taken:
            blocks.append((cur, tuple(taken)))
        cur = Forall if cur is Exists else Exists
    return blocks


def prefix_blocks(phi, prefer=None):
    """Return ``(blocks, matrix)`` of the prenex form of ``phi``.

    ``prefer`` is ``"sigma"`` (start with an existential block when it
    helps), ``"pi"`` or ``None`` (fewest blocks; ties go to sigma)."""
    psi = rename_apart(to_nnf(phi))
    matrix, forest = _strip(psi)
    if prefer == "sigma":
        blocks = _peel(forest, Exists)
    elif prefer == "pi":
        blocks = _peel(forest, Forall)
    elif prefer is None:
        bs, bp = _peel(forest, Exists), _peel(forest, Forall)
        blocks = bp if len(bp) < len(bs) else bs
    else:
        raise ValueError(f"prefer must be 'sigma', 'pi' or None, not {prefer!r}")
    return blocks, matrix


def to_prenex(phi, prefer=None):
    """Prenex normal form with greedily merged quantifier blocks.

    Bound variables are renamed apart first; the matrix is in NNF.
    Pulling quantifiers out is sound because structures are non-empty."""
    blocks, matrix = prefix_blocks(phi, prefer)
    out = matrix
    for kind, vs in reversed(blocks):
        out = kind(vs, out)
    return out


def classify(phi, prefer=None):
    """Prefix class of the prenex form produced by :func:`to_prenex`."""
    blocks, _ = prefix_blocks(phi, prefer)
    if not blocks:
        return PrefixClass(Kind.BOTH, 0)
    lead = Kind.SIGMA if blocks[0][0] is Exists else Kind.PI
    return PrefixClass(lead, len(blocks))


# ---------------------------------------------------------------- parser

class ParseError(ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<op><->|->|!=|[()!&|=<>~,.]|[∀∃¬∧∨→↔≈≠])
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
""", re.VERBOSE)

_ALIASES = {"∀": "forall", "∃": "exists", "¬": "!", "∧": "&", "∨": "|",
            "→": "->", "↔": "<->", "≈": "~", "≠": "!="}
_KEYWORDS = {"forall", "exists"}


def _tokenize(text):
    pos, out = 0, []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unknown token {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            tok = _ALIASES.get(m.group(), m.group())
            if tok in _KEYWORDS:
                kind = "kw"
            else:
                kind = "ident" if m.lastgroup == "ident" else "op"
            out.append((kind, tok, pos))
        pos = m.end()
    out.append(("eof", "", len(text)))
    return out


_INFIX_OPS = ("=", "!=", "<", ">", "~")


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, ahead=0):
        return self.toks[min(self.i + ahead, len(self.toks) - 1)]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, tok, pos = self.next()
        if tok != value or kind == "eof":
            raise ParseError(f"expected {value!r}, found {tok or 'end of input'!r}", pos)

    def at(self, value):
        kind, tok, _ = self.peek()
        return kind in ("op", "kw") and tok == value

    def formula(self):
        left = self.implication()
        if self.at("<->"):
            self.next()
            return Iff(left, self.formula())
        return left

    def implication(self):
        left = self.disjunction()
        if self.at("->"):
            self.next()
            return Implies(left, self.implication())
        return left

    def disjunction(self):
        parts = [self.conjunction()]
        while self.at("|"):
            self.next()
            parts.append(self.conjunction())
        return disj(*parts)

    def conjunction(self):
        parts = [self.unary()]
        while self.at("&"):
            self.next()
            parts.append(self.unary())
        return conj(*parts)

    def unary(self):
        kind, tok, pos = self.peek()
        if kind == "op" and tok == "!":
            self.next()
            return Not(self.unary())
        if kind == "kw":
            return self.quantified()
        return self.primary()

    def quantified(self):
        _, q, pos = self.next()
        names = []
        while self.peek()[0] == "ident":
            after = self.peek(1)
            # the first name is always a variable; later ones may start the body
            if names and after[0] == "op" and (after[1] == "(" or after[1] in _INFIX_OPS):
                break
            names.append(self.next()[1])
            if self.at(",") and self.peek(1)[0] == "ident":
                self.next()
        if not names:
            raise ParseError(f"'{q}' needs at least one variable", self.peek()[2])
        if self.peek()[1] == "." and self.peek()[0] == "op":
            self.next()
        elif len(names) > 1:
            # without a dot the last name may start the body
            raise ParseError("expected '.' after quantified variables", self.peek()[2])
        body = self.formula()
        return (Forall if q == "forall" else Exists)(tuple(names), body)

    def primary(self):
        kind, tok, pos = self.next()
        if kind == "op" and tok == "(":
            inner = self.formula()
            self.expect(")")
            return inner
        if kind != "ident":
            raise ParseError(f"unexpected {tok or 'end of input'!r}", pos)
        nkind, ntok, npos = self.peek()
        if nkind == "op" and ntok == "(":
            self.next()
            args = [self.variable()]
            while self.at(","):
                self.next()
                args.append(self.variable())
            self.expect(")")
            return Atom(tok, tuple(args))
        if nkind == "op" and ntok in _INFIX_OPS:
            self.next()
            right = self.variable()
            if ntok == "=":
                return Eq(tok, right)
            if ntok == "!=":
                return Not(Eq(tok, right))
            if ntok == ">":
                return Atom("<", (right, tok))
            return Atom(ntok, (tok, right))
        raise ParseError(f"expected an atom after {tok!r}", npos)

    def variable(self):
        kind, tok, pos = self.next()
        if kind != "ident":
            raise ParseError(f"expected a variable, found {tok or 'end of input'!r}", pos)
        return tok


def parse(text):
    """Parse the concrete syntax into a :class:`Formula`."""
    p = _Parser(text)
    phi = p.formula()
    kind, tok, pos = p.peek()
    if kind != "eof":
        raise ParseError(f"unexpected {tok!r}", pos)
    return phi


# ---------------------------------------------------------------- printer

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4, Not: 5, Atom: 6, Eq: 6,
         Exists: 0, Forall: 0}


def render(phi):
    """Inverse of :func:`parse` up to whitespace."""
    return _render(phi, 0)


def _render(phi, ctx):
    prec = _PREC[type(phi)]
    if isinstance(phi, Atom):
        if phi.rel in INFIX_RELATIONS and len(phi.args) == 2:
            s = f"{phi.args[0]} {phi.rel} {phi.args[1]}"
        else:
            s = f"{phi.rel}({','.join(phi.args)})"
    elif isinstance(phi, Eq):
        s = f"{phi.left} = {phi.right}"
    elif isinstance(phi, Not):
        b = phi.body
        if isinstance(b, Eq) or (isinstance(b, Atom) and b.rel in INFIX_RELATIONS):
            s = f"!({_render(b, 0)})"
        else:
            s = "!" + _render(b, prec)
    elif isinstance(phi, And):
        s = " & ".join(_render(p, prec + 1) for p in phi.parts)
    elif isinstance(phi, Or):
        s = " | ".join(_render(p, prec + 1) for p in phi.parts)
    elif isinstance(phi, Implies):
        s = f"{_render(phi.left, prec + 1)} -> {_render(phi.right, prec)}"
    elif isinstance(phi, Iff):
        s = f"{_render(phi.left, prec + 1)} <-> {_render(phi.right, prec)}"
    elif isinstance(phi, (Exists, Forall)):
        q = "exists" if isinstance(phi, Exists) else "forall"
        s = f"{q} {' '.join(phi.vars)}. {_render(phi.body, 0)}"
    else:
        raise TypeError(f"not a formula: {phi!r}")
    if prec < ctx or (prec == 0 and ctx > 0):
        return f"({s})"
    return s
