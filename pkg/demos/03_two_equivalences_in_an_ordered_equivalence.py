"""Two equivalences encoded by a linear order with one equivalence, and a
sentence carried across the encoding."""

from fointerp.constructions import build, marker_formula, schema
from fointerp.interpret import translate, verify
from fointerp.samples import a2, figure
from fointerp.semantics import definable_set, evaluate
from fointerp.syntax import classify, parse, render

A = a2()
for kind in ("2eq2leq-param", "2eq2leq"):
    w = build(kind, A)
    B = w.structure
    print(f"== {kind}: {A.size} elements become {B.size}")
    print(figure(B))
    print("round trip:", "verified" if verify(schema(kind), A, w).ok else "FAILED")
    print()

Bp = build("2eq2leq-param", A).structure
B = build("2eq2leq", A).structure
print("a* is defined by", render(marker_formula("AStar")))
print("  ->", [Bp.label[b] for b in definable_set(Bp, marker_formula("AStar"), "y")])
print("c1 is defined by", render(marker_formula("Psi")))
print("  ->", [B.label[b] for b in definable_set(B, marker_formula("Psi"), "x")])

# every element has a P-mate outside its own Q-class
phi = parse("forall x. exists y. (P(x,y) & !Q(x,y))")
tr = translate(schema("2eq2leq"), phi)
print(f"\nsource sentence ({classify(phi)}):", render(phi))
print(f"translation ({classify(tr)}), {len(render(tr))} characters")
print("truth in A:", evaluate(A, phi), " truth of the translation in B:", evaluate(B, tr))
