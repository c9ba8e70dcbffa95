"""Tarskian satisfaction over finite structures.

Formulas are compiled once into NNF evaluation nodes.  An existential block
over a conjunction is solved as a small constraint problem: variables are
bound fail-first, candidates come from the adjacency of positive atoms, and
every conjunct is checked as soon as its variables are bound.  Universal
blocks are evaluated as negated existential blocks.  Results of quantified
subformulas are memoized per structure on the values of their free
variables, so definable markers such as ``Psi_L(x)`` are computed once.
"""

from __future__ import annotations

from .structures import SignatureError
from .syntax import (And, Atom, Eq, Exists, Forall, Not, Or, free_vars,
                     relations_used, rename_apart, to_nnf)

__all__ = ["Evaluator", "evaluate", "evaluator_for", "definable_set", "check_formula"]


def check_formula(phi, signature):
    """Raise :class:`SignatureError` unless every atom fits ``signature``."""
    for rel, arities in relations_used(phi).items():
        if rel not in signature:
            raise SignatureError(f"unknown relation symbol {rel!r}")
        for ar in arities:
            if ar != signature[rel]:
                raise SignatureError(
                    f"relation {rel!r} has arity {signature[rel]}, used with {ar} arguments")


# ---------------------------------------------------------------- compiled nodes

class _Lit:
    __slots__ = ("rel", "args", "pos", "vars")
    quantified = False

    def __init__(self, rel, args, pos):
        self.rel, self.args, self.pos = rel, args, pos
        self.vars = frozenset(args)

    def run(self, ev, env):
        rel = self.rel
        if rel is None:
            return (env[self.args[0]] == env[self.args[1]]) == self.pos
        return (tuple(env[a] for a in self.args) in ev.rels[rel]) == self.pos


class _Bool:
    __slots__ = ("parts", "is_and", "vars", "quantified")

    def __init__(self, parts, is_and):
        # cheap literals first
        self.parts = sorted(parts, key=lambda p: p.quantified)
        self.is_and = is_and
        self.vars = frozenset().union(*(p.vars for p in parts))
        self.quantified = any(p.quantified for p in parts)

    def run(self, ev, env):
        if self.is_and:
            for p in self.parts:
                if not p.run(ev, env):
                    return False
            return True
        for p in self.parts:
            if p.run(ev, env):
                return True
        return False


class _Neg:
    __slots__ = ("body", "vars")
    quantified = True

    def __init__(self, body):
        self.body = body
        self.vars = body.vars

    def run(self, ev, env):
        return not self.body.run(ev, env)


class _Block:
    """``exists vs. (c1 & c2 & ...)`` solved by backtracking."""

    __slots__ = ("bvars", "vars", "key", "pre", "by_var", "hints", "links", "splits")
    quantified = True

    def __init__(self, bvars, conjuncts):
        self.bvars = tuple(bvars)
        bset = set(bvars)
        self.vars = frozenset().union(*(c.vars for c in conjuncts)) - bset
        self.key = tuple(sorted(self.vars))
        self.pre = [c for c in conjuncts if not (c.vars & bset)]
        # each remaining conjunct is checked once its block vars are bound;
        # literals become (rel, args, pos, others) rows tested inline
        self.by_var = {}
        for v in bvars:
            lits, deep = [], []
            for c in conjuncts:
                if v not in c.vars:
                    continue
                others = tuple(c.vars - {v})
                if isinstance(c, _Lit):
                    lits.append((c.rel, c.args, c.pos, others))
                else:
                    deep.append((c, others))
            deep.sort(key=lambda p: p[0].quantified)
            self.by_var[v] = (lits, deep)
        # block variables sharing a conjunct; once the shared neighbours are
        # bound the rest splits into independent subproblems
        self.links = [c.vars & bset for c in conjuncts if len(c.vars & bset) > 1]
        self.splits = {}
        # positive atoms that narrow a variable's candidates
        self.hints = {v: [] for v in bvars}
        for c in conjuncts:
            if not isinstance(c, _Lit) or not c.pos:
                continue
            if c.rel is None:
                a, b = c.args
                if a in bset and b != a:
                    self.hints[a].append(("=", b))
                if b in bset and b != a:
                    self.hints[b].append(("=", a))
            elif len(c.args) == 1:
                if c.args[0] in bset:
                    self.hints[c.args[0]].append(("1", c.rel))
            elif len(c.args) == 2:
                a, b = c.args
                if a == b:
                    continue
                # a ranges over predecessors of b, b over successors of a
                if a in bset:
                    self.hints[a].append(("in", c.rel, b))
                if b in bset:
                    self.hints[b].append(("out", c.rel, a))

    def run(self, ev, env):
        memo_key = (self, tuple(env[v] for v in self.key))
        hit = ev.memo.get(memo_key)
        if hit is not None:
            return hit
        ok = all(c.run(ev, env) for c in self.pre)
        if ok:
            local = {v: env[v] for v in self.key}
            ok = self._search(ev, local, list(self.bvars))
        ev.memo[memo_key] = ok
        return ok

    def _candidates(self, ev, env, v):
        best = None
        for h in self.hints[v]:
            if h[0] == "=":
                if h[1] in env:
                    return (env[h[1]],)
                continue
            if h[0] == "1":
                cand = ev.unary[h[1]]
            else:
                other = h[2]
                if other not in env:
                    continue
                idx = ev.out if h[0] == "out" else ev.inn
                cand = idx[h[1]].get(env[other], ())
            if best is None or len(cand) < len(best):
                best = cand
                if not best:
                    return best
        return ev.universe if best is None else best

    def _split(self, todo):
        key = frozenset(todo)
        comps = self.splits.get(key)
        if comps is None:
            parent = {v: v for v in todo}

            def root(v):
                while parent[v] != v:
                    parent[v] = parent[parent[v]]
                    v = parent[v]
                return v
            for link in self.links:
                live = [v for v in link if v in key]
                for v in live[1:]:
                    parent[root(v)] = root(live[0])
            groups = {}
            for v in todo:
                groups.setdefault(root(v), []).append(v)
            comps = sorted(groups.values(), key=len)
            self.splits[key] = comps
        return comps

    def _search(self, ev, env, todo):
        if not todo:
            return True
        if len(todo) > 1:
            comps = self._split(todo)
            if len(comps) > 1:
                return all(self._search(ev, env, comp) for comp in comps)
        pick, cands = None, None
        for v in todo:
            c = self._candidates(ev, env, v)
            if cands is None or len(c) < len(cands):
                pick, cands = v, c
                if len(c) <= 1:
                    break
        if not cands:
            return False
        rest = [u for u in todo if u != pick]
        lits, deep = self.by_var[pick]
        lits = [row for row in lits if all(o in env for o in row[3])]
        deep = [c for c, others in deep if all(o in env for o in others)]
        rels = ev.rels
        for val in cands:
            env[pick] = val
            for rel, args, pos, _ in lits:
                if rel is None:
                    hit = env[args[0]] == env[args[1]]
                elif len(args) == 2:
                    hit = (env[args[0]], env[args[1]]) in rels[rel]
                else:
                    hit = tuple([env[a] for a in args]) in rels[rel]
                if hit != pos:
                    break
            else:
                for c in deep:
                    if not c.run(ev, env):
                        break
                else:
                    if self._search(ev, env, rest):
                        del env[pick]
                        return True
        del env[pick]
        return False


class _Memo:
    """Memoizing wrapper for quantified subformulas that are not blocks."""

    __slots__ = ("body", "vars", "key")
    quantified = True

    def __init__(self, body):
        self.body = body
        self.vars = body.vars
        self.key = tuple(sorted(self.vars))

    def run(self, ev, env):
        k = (self, tuple(env[v] for v in self.key))
        hit = ev.memo.get(k)
        if hit is None:
            hit = ev.memo[k] = self.body.run(ev, env)
        return hit


def _compile(phi):
    """Compile an NNF formula whose binders are pairwise distinct."""
    if isinstance(phi, Atom):
        return _Lit(phi.rel, phi.args, True)
    if isinstance(phi, Eq):
        return _Lit(None, (phi.left, phi.right), True)
    if isinstance(phi, Not):
        b = phi.body
        if isinstance(b, Atom):
            return _Lit(b.rel, b.args, False)
        return _Lit(None, (b.left, b.right), False)
    if isinstance(phi, (And, Or)):
        return _Bool([_compile(p) for p in phi.parts], isinstance(phi, And))
    if isinstance(phi, Exists):
        return _compile_exists(phi)
    if isinstance(phi, Forall):
        return _Neg(_compile_exists(Exists(phi.vars, to_nnf(Not(phi.body)))))
    raise TypeError(f"not a formula: {phi!r}")


def _compile_exists(phi):
    bvars = list(phi.vars)
    body = phi.body
    while isinstance(body, Exists):
        bvars.extend(body.vars)
        body = body.body
    if isinstance(body, Or):
        # exists distributes over a disjunction
        parts = [_compile_exists(Exists(tuple(bvars), p)) for p in body.parts]
        return _Memo(_Bool(parts, False))
    conjuncts = list(body.parts) if isinstance(body, And) else [body]
    compiled = [_compile(c) for c in conjuncts]
    used = set().union(*(c.vars for c in compiled))
    # an unused variable ranges over a non-empty universe: drop it
    bvars = [v for v in bvars if v in used]
    if not bvars:
        return _Bool(compiled, True) if len(compiled) > 1 else compiled[0]
    return _Block(bvars, compiled)


_COMPILED = {}


def _compiled(phi):
    node = _COMPILED.get(phi)
    if node is None:
        if len(_COMPILED) > 50000:
            _COMPILED.clear()
        node = _COMPILED[phi] = _compile(rename_apart(to_nnf(phi)))
    return node


# ---------------------------------------------------------------- evaluator

class Evaluator:
    """Model checker bound to one structure; keeps a memo across calls."""

    def __init__(self, structure):
        self.structure = structure
        self.universe = range(structure.size)
        self.rels = structure.relations
        self.out, self.inn, self.unary = {}, {}, {}
        for rel, ts in structure.relations.items():
            ar = structure.signature[rel]
            if ar == 1:
                self.unary[rel] = sorted(t[0] for t in ts)
            elif ar == 2:
                out, inn = {}, {}
                for a, b in ts:
                    out.setdefault(a, []).append(b)
                    inn.setdefault(b, []).append(a)
                self.out[rel], self.inn[rel] = out, inn
        self.memo = {}
        self._checked = set()

    def holds(self, phi, assignment=None):
        assignment = dict(assignment or {})
        if phi not in self._checked:
            check_formula(phi, self.structure.signature)
            self._checked.add(phi)
        missing = free_vars(phi) - assignment.keys()
        if missing:
            raise SignatureError(f"unbound variable(s): {', '.join(sorted(missing))}")
        for v, a in assignment.items():
            if not 0 <= a < self.structure.size:
                raise ValueError(f"variable {v} assigned {a}, outside the universe")
        return _compiled(phi).run(self, assignment)


def evaluator_for(structure):
    ev = structure.__dict__.get("_evaluator")
    if ev is None:
        ev = Evaluator(structure)
        structure.__dict__["_evaluator"] = ev
    return ev


def evaluate(structure, phi, assignment=None):
    """Truth value of ``phi`` in ``structure`` under ``assignment``."""
    return evaluator_for(structure).holds(phi, assignment)


def definable_set(structure, phi, var):
    """``{b : structure |= phi[var := b]}``; ``var`` must be the only free variable."""
    fv = free_vars(phi)
    if fv != {var}:
        raise ValueError(f"expected exactly one free variable {var!r}, found {sorted(fv)}")
    ev = evaluator_for(structure)
    return {b for b in structure.universe if ev.holds(phi, {var: b})}
