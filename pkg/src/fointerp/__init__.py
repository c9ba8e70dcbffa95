"""Sigma_1 interpretations between classes of finite structures.

Bipartite graphs are interpreted in pairs of equivalences, and pairs of
equivalences in a linear order with an equivalence, with and without
parameters.  The package checks the constructions on concrete structures,
translates sentences along them, and decides the Pi_2 fragments by
small-model search.
"""

from .classes import ClassId, axiom, gen_random, members, signature_of, validate
from .constructions import (ConstructionKind, build, marker_formula, q_link_count,
                            schema, theta)
from .decide import (Pi2Verdict, bsr_bound, decide_pi2, decide_pi2_in_class,
                     relativize_to_class, search_counterexample)
from .interpret import (ConditionReport, InterpretationSchema, Witness, induce,
                        translate, translation_class, verify)
from .semantics import definable_set, evaluate
from .structures import (CapExceeded, FiniteStructure, Signature, SignatureError,
                         enumerate_structures, isomorphism)
from .syntax import (Kind, ParseError, PrefixClass, classify, free_vars, parse,
                     render, to_nnf, to_prenex)

__all__ = [
    "ClassId", "axiom", "gen_random", "members", "signature_of", "validate",
    "ConstructionKind", "build", "marker_formula", "q_link_count", "schema", "theta",
    "Pi2Verdict", "bsr_bound", "decide_pi2", "decide_pi2_in_class",
    "relativize_to_class", "search_counterexample",
    "ConditionReport", "InterpretationSchema", "Witness", "induce", "translate",
    "translation_class", "verify",
    "definable_set", "evaluate",
    "CapExceeded", "FiniteStructure", "Signature", "SignatureError",
    "enumerate_structures", "isomorphism",
    "Kind", "ParseError", "PrefixClass", "classify", "free_vars", "parse", "render",
    "to_nnf", "to_prenex",
]
