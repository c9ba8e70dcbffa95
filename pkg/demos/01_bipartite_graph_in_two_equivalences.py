"""A bipartite graph encoded by two equivalence relations, with four
marker parameters, and read back by an existential schema."""

from fointerp.constructions import build, schema
from fointerp.interpret import Witness, verify
from fointerp.samples import figure, g0, g0_three_edges
from fointerp.syntax import render

G = g0()
w = build("big2eq-param", G)
B = w.structure
print(f"source graph: {G.size} vertices, edges l1-r1 and l2-r2")
print(f"target structure: {B.size} elements\n")
print(figure(B))

sch = schema("big2eq-param")
print("\ndomain formula:", render(sch.phi_u))
print("edge formula:  ", render(sch.relations["E"][0]))

rep = verify(sch, G, w)
pairs = ", ".join(f"{G.label[a]}->{B.label[b]}" for a, b in enumerate(rep.bijection))
print("\nround trip:", "verified" if rep.ok else rep.failed, f"({pairs})")

# a graph with an extra edge is not what B encodes
print("three-edge graph against B:", verify(sch, g0_three_edges(), w).failed)

# exchanging the L and P markers carves out the wrong domain
bad = Witness(B, {"yL": B["cP"], "yR": B["cR"], "yP": B["cL"], "yN": B["cN"]})
rep = verify(sch, G, bad)
print("swapped markers:", rep.failed, "with domain",
      sorted(B.label[b] for b in rep.conditions.domain))
