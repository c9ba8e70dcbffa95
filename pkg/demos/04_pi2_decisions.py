"""Deciding universal-existential sentences by small-model search, in
general and inside a class given by one axiom."""

from fointerp.classes import axiom
from fointerp.decide import decide_pi2, decide_pi2_in_class, relativize_to_class, search_counterexample
from fointerp.samples import figure
from fointerp.structures import Signature
from fointerp.syntax import classify, parse, render


def show(label, v):
    extra = f", countermodel of size {v.countermodel.size}" if v.countermodel else ""
    print(f"{label:55s} {v.outcome} (bound {v.bound}){extra}")


E = Signature(E=2)
for text in ("forall x. exists y. x = y",
             "forall x. exists y. E(x,y)",
             "forall x y. exists z. (E(x,z) | E(z,y) | x = y)"):
    show(text, decide_pi2(E, parse(text)))

print()
theta = axiom("2eq")
phi = parse("forall x y. (P(x,y) -> P(y,x))")
rel = relativize_to_class(theta, phi)
print("axiom of two equivalences:", classify(theta))
print("relativized sentence:", classify(rel), f"({len(render(rel))} characters)")
show(render(phi), decide_pi2_in_class(theta, phi))
phi = parse("forall x. exists y. (P(x,y) & !(x = y))")
v = decide_pi2_in_class(theta, phi)
show(render(phi), v)
print(figure(v.countermodel))

print()
S = search_counterexample("2eq", parse("forall x y. P(x,y)"), 3)
print("smallest two-equivalence structure with two P-classes:")
print(figure(S))
print("nonempty left part up to 7 vertices:",
      search_counterexample("bigraph3", parse("exists x. L(x)"), 7) is None)
