"""Symbolic dependency analysis and the auxiliary ground network.

Instead of grounding everything, the engine derives, per pair of relations,
a *parent formula* pa_{r,r'}(x̄, ȳ) characterizing which ground atoms
r'(ȳ) the label of r(x̄) actually reads.  These formulas drive both the
minimal ground-network construction and quantifier elimination into
cardinality normal forms.
"""
from rbnet import (EMPTY_EVIDENCE, GroundAtom, build_auxiliary_network,
                   corpus, normalize, parent_formula)
from rbnet.cli import format_dependency, format_normal_form

model = corpus.robot_model()
n = model.network

for r, rp in (("s", "b"), ("s", "t"), ("b", "s")):
    d = parent_formula(n, r, rp)
    print(f"pa_{{{r},{rp}}} = {format_dependency(d)}")
    cnf = normalize(d)
    print("  equality types:",
          format_normal_form(cnf, d.xvars + d.yvars).replace("\n", " | "))

# s(l1) reads t everywhere but b only on edges touching l1; on |D| = 10 the
# auxiliary network therefore has exactly 1 + 10 + 18 = 29 nodes, not the
# 10 + 100 + 10 = 120 atoms of the full grounding.
s = corpus.plain_structure(10)
g = build_auxiliary_network(n, s, EMPTY_EVIDENCE, GroundAtom("s", ("l1",)),
                            model.registry)
print(f"\nauxiliary network for s(l1), |D| = 10: {g.node_count} nodes, "
      f"{g.edge_count} edges")
by_rel = {}
for atom in g.nodes:
    by_rel.setdefault(atom.relation, []).append(atom)
for rel in sorted(by_rel):
    print(f"  {rel}: {len(by_rel[rel])} atoms")
