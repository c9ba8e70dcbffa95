"""Command line interface.

Exit codes: 0 success (valid, verified), 1 negative outcome (invalid,
verification failed, counterexample found), 2 usage error, 3 bad input
(unreadable file, malformed JSON, formula syntax, signature mismatch),
4 search cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import samples
from .classes import ClassId, axiom, gen_random, signature_of
from .constructions import ConstructionKind, build, schema
from .decide import (PrefixError, decide_pi2, decide_pi2_in_class,
                     search_counterexample)
from .interpret import FAILURES, Witness, dump_schema, translate, verify
from .structures import (CapExceeded, Signature, SignatureError, dump_structure,
                         load_structure)
from .syntax import ParseError, classify, free_vars, parse, render

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3, 4

KINDS = [k.value for k in ConstructionKind]
CLASSES = [c.value for c in ClassId]
AXIOM_CLASSES = [c.value for c in ClassId if c is not ClassId.ALL]


class InputError(Exception):
    pass


def _formula(args):
    if args.formula is not None and args.file is not None:
        raise InputError("give either --formula or --file, not both")
    if args.file is not None:
        with open(args.file) as fh:
            return parse(fh.read())
    if args.formula is None:
        raise InputError("a formula is required (--formula or --file)")
    return parse(args.formula)


def _emit(args, data, text):
    if args.json:
        print(json.dumps(data, indent=1, ensure_ascii=False))
    else:
        print(text)


def _load_json_arg(value):
    """A JSON document given inline or as a path to a file."""
    if os.path.exists(value):
        with open(value) as fh:
            return json.load(fh)
    return json.loads(value)


# ---------------------------------------------------------------- commands

def cmd_parse(args):
    phi = _formula(args)
    data = {"formula": render(phi), "freeVars": sorted(free_vars(phi)),
            "class": str(classify(phi))}
    _emit(args, data, render(phi))
    return EXIT_OK


def cmd_classify(args):
    c = classify(_formula(args))
    _emit(args, {"kind": c.kind.value, "k": c.k}, str(c))
    return EXIT_OK


def cmd_translate(args):
    sch = schema(args.kind)
    out = translate(sch, _formula(args), close_params=not args.open_params,
                    matrix=args.matrix)
    c = classify(out)
    _emit(args, {"formula": render(out), "class": str(c)}, render(out))
    return EXIT_OK


def cmd_construct(args):
    A = load_structure(args.input)
    w = build(args.kind, A)
    if args.output:
        dump_structure(w.structure, args.output)
    label = w.structure.label
    params = {p: label.get(b, b) for p, b in w.params.items()}
    data = {"size": w.structure.size, "params": params}
    if not args.output:
        data["structure"] = w.structure.to_json()
    text = f"built {args.kind}: {w.structure.size} elements"
    if params:
        text += ", parameters " + ", ".join(f"{p}={v}" for p, v in params.items())
    if args.output:
        text += f", written to {args.output}"
    _emit(args, data, text)
    return EXIT_OK


def _witness(args, sch, A):
    if args.witness is None:
        return build(args.kind, A)
    B = load_structure(args.witness)
    params = {}
    for item in args.param or []:
        name, _, value = item.partition("=")
        if not value:
            raise InputError(f"--param expects name=element, got {item!r}")
        params[name] = B.names[value] if value in B.names else int(value)
    return Witness(B, params)


def cmd_verify(args):
    sch = schema(args.kind)
    A = load_structure(args.input)
    w = _witness(args, sch, A)
    rep = verify(sch, A, w)
    names = w.structure.names
    if rep.ok:
        label = w.structure.label
        pairs = ", ".join(f"{A.label.get(a, a)}->{label.get(b, b)}"
                          for a, b in enumerate(rep.bijection))
        text = f"verified: {len(rep.bijection)} elements, bijection {pairs}"
    else:
        text = f"FAILED {FAILURES[rep.failed]}"
        if rep.failed == "complement":
            label = w.structure.label
            shown = "; ".join(f"{r}({', '.join(str(label.get(b, b)) for b in t)})"
                              for r, t in rep.conditions.violations[:5])
            text += f"\n  violating tuples: {shown}"
    _emit(args, rep.to_json(names), text)
    return EXIT_OK if rep.ok else EXIT_NEGATIVE


def cmd_schema(args):
    sch = schema(args.kind)
    if args.output:
        dump_schema(sch, args.output)
        print(f"schema {args.kind} written to {args.output}")
    else:
        print(json.dumps(sch.to_json(), indent=1, ensure_ascii=False))
    return EXIT_OK


def _verdict(args, v):
    text = f"{v.outcome} (bound {v.bound})"
    if v.countermodel is not None:
        text += f"\ncountermodel: {json.dumps(v.countermodel.to_json())}"
    _emit(args, v.to_json(), text)
    return EXIT_OK if v.valid else EXIT_NEGATIVE


def cmd_decide_pi2(args):
    sig = Signature(_load_json_arg(args.sig))
    return _verdict(args, decide_pi2(sig, _formula(args), args.cap))


def cmd_decide_pi2_class(args):
    theta = axiom(args.axiom)
    sig = signature_of(args.axiom)
    return _verdict(args, decide_pi2_in_class(theta, _formula(args), sig, args.cap))


def cmd_search(args):
    phi = _formula(args)
    sig = Signature(_load_json_arg(args.sig)) if args.sig else None
    S = search_counterexample(args.cls, phi, args.max_size, sig, args.cap)
    if S is None:
        _emit(args, {"counterexample": None, "maxSize": args.max_size},
              f"no counterexample: holds in every {args.cls} member up to size {args.max_size}")
        return EXIT_OK
    _emit(args, {"counterexample": S.to_json(), "maxSize": args.max_size},
          f"counterexample of size {S.size}: {json.dumps(S.to_json())}")
    return EXIT_NEGATIVE


def cmd_gen(args):
    S = gen_random(args.cls, args.seed, size=args.size, m=args.m, n=args.n, p=args.p)
    if args.output:
        dump_structure(S, args.output)
        print(f"{args.cls} structure of size {S.size} written to {args.output}")
    else:
        print(json.dumps(S.to_json(), indent=1))
    return EXIT_OK


_DEMO_INPUT = {
    ConstructionKind.BIG2EQ_P: ("G0", samples.g0),
    ConstructionKind.BIG2EQ: ("G1", samples.g1),
    ConstructionKind.TWOEQ2LEQ_P: ("A2", samples.a2),
    ConstructionKind.TWOEQ2LEQ: ("A2", samples.a2),
}


def cmd_demo(args):
    kind = ConstructionKind(args.kind)
    name, make = _DEMO_INPUT[kind]
    A = make()
    w = build(kind, A)
    rep = verify(schema(kind), A, w)
    label = w.structure.label
    lines = [f"{kind.value} on {name}: source size {A.size}, target size {w.structure.size}"]
    if w.params:
        lines.append("parameters: " + ", ".join(f"{p}={label[b]}" for p, b in w.params.items()))
    lines.append(samples.figure(w.structure))
    lines.append("round trip: " + ("verified" if rep.ok else FAILURES[rep.failed]))
    data = {"kind": kind.value, "input": name, "source": A.to_json(),
            "structure": w.structure.to_json(),
            "params": {p: label[b] for p, b in w.params.items()}, "verified": rep.ok}
    _emit(args, data, "\n".join(lines))
    return EXIT_OK if rep.ok else EXIT_NEGATIVE


# ---------------------------------------------------------------- parser

def _add_formula(p):
    p.add_argument("--formula", help="formula text")
    p.add_argument("--file", help="file holding the formula text")


def build_parser():
    ap = argparse.ArgumentParser(prog="fointerp", description=(
        "Sigma_1 interpretations between finite bipartite graphs, pairs of "
        "equivalences and ordered equivalences; Pi_2 decision procedures."))
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--cap", type=int, default=None,
                        help="enumeration slot cap (default FOINTERP_CAP or 24)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", parents=[common], help="parse and print a formula")
    _add_formula(p)
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("classify", parents=[common], help="prefix class of the prenex form")
    _add_formula(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("translate", parents=[common], help="translate a source sentence")
    p.add_argument("--kind", required=True, choices=KINDS)
    _add_formula(p)
    p.add_argument("--open-params", action="store_true",
                   help="leave the parameters free instead of closing them existentially")
    p.add_argument("--matrix", choices=["polar", "sigma"], default="polar",
                   help="atom translation under universal quantifiers")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("construct", parents=[common], help="build the target structure")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--input", required=True)
    p.add_argument("--output")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", parents=[common], help="build, induce and check isomorphism")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--input", required=True)
    p.add_argument("--witness", help="target structure to check instead of the build")
    p.add_argument("--param", action="append", help="parameter value name=element")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("schema", parents=[common], help="export a schema as JSON")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--output")
    p.set_defaults(func=cmd_schema)

    p = sub.add_parser("decide-pi2", parents=[common], help="Pi_2 validity")
    p.add_argument("--sig", required=True, help="signature JSON (inline or file)")
    _add_formula(p)
    p.set_defaults(func=cmd_decide_pi2)

    p = sub.add_parser("decide-pi2-class", parents=[common],
                       help="Pi_2 membership in the theory of a class")
    p.add_argument("--axiom", required=True, choices=AXIOM_CLASSES)
    _add_formula(p)
    p.set_defaults(func=cmd_decide_pi2_class)

    p = sub.add_parser("search", parents=[common], help="bounded counterexample search")
    p.add_argument("--class", dest="cls", required=True, choices=CLASSES)
    _add_formula(p)
    p.add_argument("--max-size", type=int, required=True)
    p.add_argument("--sig", help="signature JSON for --class all")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("gen", parents=[common], help="seeded random class member")
    p.add_argument("--class", dest="cls", required=True,
                   choices=[c for c in CLASSES if c != "all"])
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--size", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("demo", parents=[common], help="print a construction on its sample input")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.set_defaults(func=cmd_demo)
    return ap


def run(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, json.JSONDecodeError, ParseError, SignatureError,
            PrefixError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main():
    sys.exit(run())
