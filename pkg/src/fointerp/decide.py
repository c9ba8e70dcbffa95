"""Pi_2 validity by small-model search, and its relativization to classes
axiomatized by a single Sigma_2 sentence."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .classes import ClassId, class_signature_for, members
from .semantics import check_formula, evaluate
from .structures import (CapExceeded, FiniteStructure, Signature, enumerate_structures,
                         slot_cap, slot_count)
from .syntax import (And, Atom, Eq, Exists, Forall, Not, Or, free_vars, prefix_blocks,
                     relations_used, to_prenex)

__all__ = ["Pi2Verdict", "PrefixError", "bsr_bound", "decide_pi2", "relativize_to_class",
           "decide_pi2_in_class", "search_counterexample"]


class PrefixError(ValueError):
    """The sentence lies outside the fragment a procedure handles."""


@dataclass
class Pi2Verdict:
    outcome: str
    bound: int
    countermodel: FiniteStructure = None

    @property
    def valid(self):
        return self.outcome == "valid"

    def to_json(self):
        out = {"outcome": self.outcome, "bound": self.bound}
        if self.countermodel is not None:
            out["countermodel"] = self.countermodel.to_json()
        return out


def _sentence(phi):
    fv = free_vars(phi)
    if fv:
        raise ValueError(f"expected a sentence; free variables {sorted(fv)}")


def _pi2_blocks(phi):
    blocks, matrix = prefix_blocks(phi, prefer="pi")
    if len(blocks) > 2 or (len(blocks) == 2 and blocks[0][0] is not Forall):
        raise PrefixError("sentence is not in Pi_2 after prenexing")
    return blocks, matrix


def bsr_bound(phi):
    """Model-size bound: existential variables of the negation, at least 1."""
    _sentence(phi)
    blocks, _ = _pi2_blocks(phi)
    if blocks and blocks[0][0] is Forall:
        return max(1, len(blocks[0][1]))
    return 1


def decide_pi2(signature, phi, cap=None):
    """Valid iff no structure of size up to the bound falsifies ``phi``.

    Sizes are searched in increasing order, so a countermodel has minimal
    size.  Sizes whose slot count exceeds the cap are searched by
    backtracking over ground atoms instead of full enumeration."""
    signature = signature if isinstance(signature, Signature) else Signature(signature)
    _sentence(phi)
    check_formula(phi, signature)
    bound = bsr_bound(phi)
    limit = slot_cap(cap)
    for n in range(1, bound + 1):
        if slot_count(signature, n) <= limit:
            found = next((S for S in enumerate_structures(signature, n, limit)
                          if not evaluate(S, phi)), None)
        else:
            found = _countermodel_search(signature, phi, n)
        if found is not None:
            return Pi2Verdict("invalid", bound, found)
    return Pi2Verdict("valid", bound)


# ---------------------------------------------------------------- backtracking

def _ground(phi, env):
    """Quantifier-free NNF matrix as a closure over a partial truth table;
    returns True, False or None (undetermined)."""
    if isinstance(phi, Atom):
        key = (phi.rel, tuple(env[a] for a in phi.args))
        return lambda tt: tt.get(key)
    if isinstance(phi, Eq):
        val = env[phi.left] == env[phi.right]
        return lambda tt: val
    if isinstance(phi, Not):
        inner = _ground(phi.body, env)

        def neg(tt):
            v = inner(tt)
            return None if v is None else not v
        return neg
    parts = [_ground(p, env) for p in phi.parts]
    if isinstance(phi, And):
        def conj(tt):
            out = True
            for p in parts:
                v = p(tt)
                if v is False:
                    return False
                if v is None:
                    out = None
            return out
        return conj

    def disj(tt):
        out = False
        for p in parts:
            v = p(tt)
            if v is True:
                return True
            if v is None:
                out = None
        return out
    return disj


def _atoms(phi, env):
    if isinstance(phi, Atom):
        yield (phi.rel, tuple(env[a] for a in phi.args))
    elif isinstance(phi, Not):
        yield from _atoms(phi.body, env)
    elif isinstance(phi, (And, Or)):
        for p in phi.parts:
            yield from _atoms(p, env)


def _countermodel_search(signature, phi, n):
    """A structure of size ``n`` satisfying ``exists xs forall ys. matrix``
    (the prenexed negation of ``phi``), or ``None``.

    Ground atoms are decided in a fixed order; each ground instance of the
    matrix is checked as soon as its atoms are decided."""
    blocks, matrix = prefix_blocks(Not(phi), prefer="sigma")
    xs = blocks[0][1] if blocks and blocks[0][0] is Exists else ()
    ys = blocks[-1][1] if blocks and blocks[-1][0] is Forall else ()
    table = [(rel, t) for rel, ar in signature.items()
             for t in itertools.product(range(n), repeat=ar)]
    position = {a: i for i, a in enumerate(table)}
    # forall distributes over the conjuncts, and each conjunct is grounded
    # only over the universal variables it mentions, so checks fire early
    parts = matrix.parts if isinstance(matrix, And) else (matrix,)
    parts = [(p, [y for y in ys if y in free_vars(p)]) for p in parts]
    for xv in itertools.product(range(n), repeat=len(xs)):
        checks = [[] for _ in range(len(table) + 1)]
        for part, used in parts:
            for yv in itertools.product(range(n), repeat=len(used)):
                env = dict(zip(xs, xv))
                env.update(zip(used, yv))
                last = max((position[a] + 1 for a in _atoms(part, env)), default=0)
                checks[last].append(_ground(part, env))
        if any(c({}) is False for c in checks[0]):
            continue
        truth = {}
        if _extend(table, checks, truth, 0):
            rels = {rel: [t for (r, t), v in truth.items() if r == rel and v]
                    for rel in signature}
            return FiniteStructure(signature, n, rels)
    return None


def _extend(table, checks, truth, i):
    if i == len(table):
        return True
    atom = table[i]
    for val in (False, True):
        truth[atom] = val
        if all(c(truth) is not False for c in checks[i + 1]):
            if _extend(table, checks, truth, i + 1):
                return True
    del truth[atom]
    return False


# ---------------------------------------------------------------- classes

def relativize_to_class(theta, phi):
    """Prenex form of ``!theta | phi``; a Pi_2 sentence when ``theta`` is
    Sigma_2 and ``phi`` is Pi_2."""
    _sentence(theta)
    _sentence(phi)
    blocks, _ = prefix_blocks(theta, prefer="sigma")
    if len(blocks) > 2 or (len(blocks) == 2 and blocks[0][0] is not Exists):
        raise PrefixError("class axiom is not in Sigma_2 after prenexing")
    _pi2_blocks(phi)
    out = to_prenex(Or((Not(theta), phi)), prefer="pi")
    _pi2_blocks(out)
    return out


def decide_pi2_in_class(theta, phi, signature=None, cap=None):
    """Pi_2 membership in the theory of the models of ``theta``."""
    rel = relativize_to_class(theta, phi)
    if signature is None:
        signature = _joint_signature(theta, phi)
    return decide_pi2(signature, rel, cap)


def _joint_signature(*phis):
    arities = {}
    for phi in phis:
        for r, ars in relations_used(phi).items():
            arities.setdefault(r, set()).update(ars)
    bad = [r for r, a in arities.items() if len(a) > 1]
    if bad:
        raise ValueError(f"relation(s) used with several arities: {bad}")
    return Signature({r: a.pop() for r, a in arities.items()})


def search_counterexample(c, phi, max_size, signature=None, cap=None):
    """Smallest member of class ``c`` of size at most ``max_size`` that
    falsifies ``phi``, or ``None`` (which only means the sentence holds up
    to ``max_size``)."""
    c = ClassId(c)
    _sentence(phi)
    sig = signature or class_signature_for(c, phi)
    check_formula(phi, sig)
    for n in range(1, max_size + 1):
        for S in members(c, n, sig, cap):
            if not evaluate(S, phi):
                return S
    return None
