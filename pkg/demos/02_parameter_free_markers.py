"""Without parameters the marker classes must identify themselves.  Each
pair of marker P-classes is joined by a distinct number of Q-links, and
the Psi formulas pick out exactly the intended elements."""

import time

from fointerp.constructions import BIG2EQ_MARKERS, build, marker_formula, q_link_count, schema, theta
from fointerp.interpret import verify
from fointerp.samples import g1
from fointerp.semantics import definable_set, evaluate

G = g1()
B = build("big2eq", G).structure
print(f"3x3 matching: target has {B.size} elements")

for tag, (plain, tilde, links) in BIG2EQ_MARKERS.items():
    got = q_link_count(B, B[f"c{tag}1"], B[f"c{tag}1~"])
    print(f"  {tag}: classes of {plain} and {tilde} markers, {got} Q-links (expected {links})")

# the L witness: four plain markers plus l1 against the four tilde markers
env = {f"x{k}": B[f"cL{k}"] for k in range(1, 5)}
env |= {"x5": B["l1"]} | {f"y{k}": B[f"cL{k}~"] for k in range(1, 5)}
print("\ntheta(5,4,4) holds on the L markers:", evaluate(B, theta(5, 4, 4), env))

for name in ("PsiL", "PsiR", "PsiP", "PsiN"):
    t = time.perf_counter()
    found = definable_set(B, marker_formula(name), "x")
    shown = sorted(B.label[b] for b in found)
    print(f"{name}: {len(found):2d} elements  {' '.join(shown)}  ({time.perf_counter() - t:.2f}s)")

t = time.perf_counter()
rep = verify(schema("big2eq"), G, build("big2eq", G))
print(f"\nround trip: {'verified' if rep.ok else rep.failed} in {time.perf_counter() - t:.2f}s")
