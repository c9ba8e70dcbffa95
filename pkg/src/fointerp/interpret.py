"""Interpretation schemas, induced structures and sentence translation.

A schema over a target signature defines a source structure inside a
target structure ``B`` with parameter values ``p``:

* the domain is ``{b : B |= phi_u(b, p)}``;
* each source relation ``R`` has a positive formula and a negative formula
  that must be complementary on tuples over the domain;
* the induced structure interprets ``R`` by the positive formula.

Relation formulas use the free variables ``x1 .. xn``; ``phi_u`` and the
optional ``phi_not_u`` use ``x``.  Any of them may also use the parameters.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

from .semantics import check_formula, evaluator_for
from .structures import FiniteStructure, Signature, SignatureError, isomorphism
from .syntax import (And, Atom, Eq, Exists, Forall, Kind, Not, Or, PrefixClass,
                     classify, conj, disj, free_vars, parse, render,
                     rename_apart, substitute, to_nnf, variables)

__all__ = ["InterpretationSchema", "Witness", "ConditionReport", "VerifyReport",
           "induce", "verify", "translate", "translation_class", "schema_k",
           "load_schema", "dump_schema"]


def _rel_vars(n):
    return tuple(f"x{i}" for i in range(1, n + 1))


@dataclass(frozen=True)
class InterpretationSchema:
    source: Signature
    target: Signature
    params: tuple
    phi_u: object
    relations: dict
    phi_not_u: object = None

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(self.params))
        object.__setattr__(self, "relations", dict(sorted(self.relations.items())))
        if set(self.relations) != set(self.source):
            raise SignatureError("schema must give formulas for exactly the source relations")
        allowed = {"x"} | set(self.params)
        for f in self.formulas_for("U"):
            self._check(f, allowed, "phi_u")
        for rel, pair in self.relations.items():
            allowed = set(_rel_vars(self.source[rel])) | set(self.params)
            for f in pair:
                self._check(f, allowed, rel)

    def _check(self, f, allowed, what):
        check_formula(f, self.target)
        extra = free_vars(f) - allowed
        if extra:
            raise SignatureError(f"{what} formula has unexpected free variables {sorted(extra)}")

    def formulas_for(self, key):
        if key == "U":
            return [self.phi_u] + ([self.phi_not_u] if self.phi_not_u is not None else [])
        return list(self.relations[key])

    def all_formulas(self):
        out = self.formulas_for("U")
        for pair in self.relations.values():
            out.extend(pair)
        return out

    def pos(self, rel):
        return self.relations[rel][0]

    def neg(self, rel):
        return self.relations[rel][1]

    def to_json(self):
        out = {
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "params": list(self.params),
            "phiU": render(self.phi_u),
        }
        if self.phi_not_u is not None:
            out["phiNotU"] = render(self.phi_not_u)
        out["relations"] = {r: {"pos": render(p), "neg": render(n)}
                            for r, (p, n) in self.relations.items()}
        return out

    @classmethod
    def from_json(cls, data):
        try:
            rels = {r: (parse(d["pos"]), parse(d["neg"])) for r, d in data["relations"].items()}
            not_u = data.get("phiNotU")
            return cls(Signature(data["source"]), Signature(data["target"]),
                       tuple(data.get("params", ())), parse(data["phiU"]), rels,
                       parse(not_u) if not_u is not None else None)
        except (KeyError, TypeError, AttributeError) as exc:
            raise ValueError(f"malformed schema JSON: {exc}") from exc


def load_schema(path):
    with open(path) as fh:
        return InterpretationSchema.from_json(json.load(fh))


def dump_schema(sch, path):
    with open(path, "w") as fh:
        json.dump(sch.to_json(), fh, indent=1, ensure_ascii=False)
        fh.write("\n")


@dataclass
class Witness:
    """A target structure with parameter values (and, for builds, the
    expected embedding of the source carrier)."""
    structure: FiniteStructure
    params: dict = field(default_factory=dict)
    embedding: list = None

    @property
    def names(self):
        return self.structure.names

    def to_json(self):
        out = {"structure": self.structure.to_json(), "params": dict(self.params)}
        if self.embedding is not None:
            out["embedding"] = list(self.embedding)
        return out


@dataclass
class ConditionReport:
    domain: list
    domain_nonempty: bool
    complement_consistent: bool
    violations: list
    not_u_consistent: object = None
    not_u_violations: list = field(default_factory=list)
    induced: FiniteStructure = None
    element_map: list = None

    def to_json(self, names=None):
        label = {v: k for k, v in (names or {}).items()}
        show = lambda b: label.get(b, b)  # noqa: E731
        out = {
            "domain": [show(b) for b in self.domain],
            "domainNonEmpty": self.domain_nonempty,
            "complementConsistent": self.complement_consistent,
            "violations": [[r, [show(b) for b in t]] for r, t in self.violations],
        }
        if self.not_u_consistent is not None:
            out["notUConsistent"] = self.not_u_consistent
        if self.induced is not None:
            out["induced"] = self.induced.to_json()
            out["elementMap"] = [show(b) for b in self.element_map]
        return out


def _param_env(sch, w):
    missing = set(sch.params) - set(w.params)
    if missing:
        raise ValueError(f"witness lacks values for parameters {sorted(missing)}")
    return {p: w.params[p] for p in sch.params}


def induce(sch, w, max_violations=20):
    """Domain, complement check over domain tuples and the induced structure."""
    B = w.structure
    if B.signature != sch.target:
        raise SignatureError("witness structure is not over the schema's target signature")
    env = _param_env(sch, w)
    ev = evaluator_for(B)
    domain = [b for b in B.universe if ev.holds(sch.phi_u, dict(env, x=b))]
    report = ConditionReport(domain, bool(domain), True, [])
    if sch.phi_not_u is not None:
        # the negated domain formula must be the complement on all of B
        report.not_u_consistent = True
        dom = set(domain)
        for b in B.universe:
            if ev.holds(sch.phi_not_u, dict(env, x=b)) == (b in dom):
                report.not_u_consistent = False
                report.not_u_violations.append(b)
    if not domain:
        return report
    rels = {}
    for rel, (pos, neg) in sch.relations.items():
        xs = _rel_vars(sch.source[rel])
        true = []
        for t in itertools.product(domain, repeat=len(xs)):
            a = dict(env, **dict(zip(xs, t)))
            p = ev.holds(pos, a)
            if ev.holds(neg, a) == p:
                report.complement_consistent = False
                if len(report.violations) < max_violations:
                    report.violations.append((rel, t))
            if p:
                true.append(t)
        rels[rel] = true
    if report.complement_consistent:
        index = {b: i for i, b in enumerate(domain)}
        report.induced = FiniteStructure(
            sch.source, len(domain),
            {r: [tuple(index[b] for b in t) for t in ts] for r, ts in rels.items()})
        report.element_map = list(domain)
    return report


@dataclass
class VerifyReport:
    ok: bool
    failed: str
    conditions: ConditionReport
    bijection: list = None

    def to_json(self, names=None):
        out = {"ok": self.ok, "failed": self.failed,
               "conditions": self.conditions.to_json(names)}
        if self.bijection is not None:
            out["bijection"] = list(self.bijection)
        return out


FAILURES = {
    "domain": "condition 1: the defined domain is empty",
    "complement": "condition 2: positive and negative relation formulas are not complementary",
    "not_u": "the negated domain formula is not the complement of the domain",
    "isomorphism": "condition 3: the induced structure is not isomorphic to the source",
}


def verify(sch, A, w):
    """Check the three conditions of an interpretation for ``A`` in ``w``.

    ``bijection[a]`` is the element of the target carrier representing
    source element ``a``."""
    if A.signature != sch.source:
        raise SignatureError("source structure is not over the schema's source signature")
    rep = induce(sch, w)
    if not rep.domain_nonempty:
        return VerifyReport(False, "domain", rep)
    if not rep.complement_consistent:
        return VerifyReport(False, "complement", rep)
    if rep.not_u_consistent is False:
        return VerifyReport(False, "not_u", rep)
    f = isomorphism(A, rep.induced)
    if f is None:
        return VerifyReport(False, "isomorphism", rep)
    return VerifyReport(True, None, rep, [rep.element_map[i] for i in f])


# ---------------------------------------------------------------- translation

def translate(sch, phi, close_params=True, matrix="polar"):
    """Relativize a source sentence to the schema.

    Quantifiers are bounded by the domain formula.  With ``matrix="polar"``
    atoms read the schema formula whose prefix fits the innermost enclosing
    quantifier: under an existential quantifier ``R`` becomes ``phi_R`` and
    ``!R`` becomes ``phi_notR``; under a universal one ``R`` becomes
    ``!phi_notR`` and ``!R`` becomes ``!phi_R``.  This keeps a translated
    block of quantifiers a single block.  ``matrix="sigma"`` always uses
    ``phi_R`` and ``phi_notR``.  Parameters are closed existentially unless
    ``close_params`` is false."""
    if matrix not in ("polar", "sigma"):
        raise ValueError(f"matrix must be 'polar' or 'sigma', not {matrix!r}")
    fv = free_vars(phi)
    if fv:
        raise ValueError(f"translate needs a sentence; free variables {sorted(fv)}")
    check_formula(phi, sch.source)
    avoid = set(sch.params) | {"x"}
    for f in sch.all_formulas():
        avoid |= variables(f)
    psi = rename_apart(to_nnf(phi), avoid=avoid)
    out = _tr(sch, psi, Exists, matrix == "polar")
    if close_params and sch.params:
        out = Exists(sch.params, out)
    return out


def _negate(f):
    return f.body if isinstance(f, Not) else Not(f)


def _inst(f, args):
    return substitute(f, dict(zip(_rel_vars(len(args)), args)))


def _tr(sch, phi, scope, polar):
    if isinstance(phi, Eq) or (isinstance(phi, Not) and isinstance(phi.body, Eq)):
        return phi
    if isinstance(phi, Atom):
        pos, neg = sch.relations[phi.rel]
        if polar and scope is Forall:
            return _negate(_inst(neg, phi.args))
        return _inst(pos, phi.args)
    if isinstance(phi, Not):
        pos, neg = sch.relations[phi.body.rel]
        if polar and scope is Forall:
            return _negate(_inst(pos, phi.body.args))
        return _inst(neg, phi.body.args)
    if isinstance(phi, And):
        return And(tuple(_tr(sch, p, scope, polar) for p in phi.parts))
    if isinstance(phi, Or):
        return Or(tuple(_tr(sch, p, scope, polar) for p in phi.parts))
    if isinstance(phi, Exists):
        guards = [substitute(sch.phi_u, {"x": v}) for v in phi.vars]
        return Exists(phi.vars, conj(*guards, _tr(sch, phi.body, Exists, polar)))
    if isinstance(phi, Forall):
        if sch.phi_not_u is not None:
            guards = [substitute(sch.phi_not_u, {"x": v}) for v in phi.vars]
        else:
            guards = [_negate(substitute(sch.phi_u, {"x": v})) for v in phi.vars]
        return Forall(phi.vars, disj(*guards, _tr(sch, phi.body, Forall, polar)))
    raise TypeError(f"unexpected node in NNF: {phi!r}")


def schema_k(sch):
    """Least ``k >= 1`` such that every schema formula lands in Sigma_k."""
    k = 1
    for f in sch.all_formulas():
        c = classify(f, prefer="sigma")
        if c.kind is Kind.PI:
            raise ValueError(f"schema formula {render(f)} classifies as {c}, not Sigma")
        k = max(k, c.k)
    return k


def translation_class(sch_or_k, c):
    """Prefix bound for translated sentences: ``Pi_{r+1} -> Pi_{r+k}`` and
    ``Sigma_r -> Sigma_{r+k-1}`` for a Sigma_k schema."""
    k = sch_or_k if isinstance(sch_or_k, int) else schema_k(sch_or_k)
    if k < 1:
        raise ValueError("schema prefix level must be at least 1")
    if c.kind is Kind.BOTH and c.k == 0:
        return PrefixClass(Kind.BOTH, 0)
    return PrefixClass(c.kind, c.k + k - 1)
